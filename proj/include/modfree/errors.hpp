#ifndef MODFREE_ERRORS_HPP
#define MODFREE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modfree
{

// Invalid arguments or mismatched operands (level, conductor). Maps to CLI exit code 2.
class usage_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class division_by_zero : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// A truncated series or a floating evaluation did not carry enough information
// to decide the question asked of it. Maps to CLI exit code 3.
class inconclusive_error : public std::runtime_error
{
public:
    inconclusive_error(const std::string &msg, std::string context = {})
        : std::runtime_error(msg), m_context(std::move(context))
    {
    }
    const std::string &context() const noexcept
    {
        return m_context;
    }

private:
    std::string m_context;
};

} // namespace modfree

#endif
