#ifndef MODFREE_REAL_HPP
#define MODFREE_REAL_HPP

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace modfree
{

inline constexpr mpfr_prec_t default_precision = 256;

// Owning wrapper around an mpfr_t. Every value carries its own precision;
// binary operations produce a result at the larger of the operand precisions.
class Real
{
public:
    explicit Real(mpfr_prec_t prec = default_precision);
    Real(double x, mpfr_prec_t prec);
    Real(long x, mpfr_prec_t prec);
    Real(const mpz_class &x, mpfr_prec_t prec);
    Real(const mpq_class &x, mpfr_prec_t prec);
    Real(const Real &other);
    Real(Real &&other) noexcept;
    Real &operator=(const Real &other);
    Real &operator=(Real &&other) noexcept;
    ~Real();

    static Real pi(mpfr_prec_t prec);
    static Real infinity(int sign, mpfr_prec_t prec);

    mpfr_prec_t precision() const noexcept
    {
        return mpfr_get_prec(m_v);
    }
    mpfr_srcptr get() const noexcept
    {
        return m_v;
    }
    mpfr_ptr get() noexcept
    {
        return m_v;
    }

    bool is_finite() const noexcept
    {
        return mpfr_number_p(m_v) != 0;
    }
    bool is_zero() const noexcept
    {
        return mpfr_zero_p(m_v) != 0;
    }
    int sign() const noexcept
    {
        return mpfr_sgn(m_v);
    }
    double to_double() const noexcept
    {
        return mpfr_get_d(m_v, MPFR_RNDN);
    }
    // Scientific notation with `digits` significant digits after the point; deterministic.
    std::string to_string(int digits = 30) const;

    Real &operator+=(const Real &o);
    Real &operator-=(const Real &o);
    Real &operator*=(const Real &o);
    Real &operator/=(const Real &o);
    Real operator-() const;

    friend Real operator+(Real a, const Real &b)
    {
        return a += b;
    }
    friend Real operator-(Real a, const Real &b)
    {
        return a -= b;
    }
    friend Real operator*(Real a, const Real &b)
    {
        return a *= b;
    }
    friend Real operator/(Real a, const Real &b)
    {
        return a /= b;
    }

    friend bool operator<(const Real &a, const Real &b)
    {
        return mpfr_less_p(a.m_v, b.m_v) != 0;
    }
    friend bool operator>(const Real &a, const Real &b)
    {
        return b < a;
    }
    friend bool operator<=(const Real &a, const Real &b)
    {
        return mpfr_lessequal_p(a.m_v, b.m_v) != 0;
    }
    friend bool operator>=(const Real &a, const Real &b)
    {
        return b <= a;
    }
    friend bool operator==(const Real &a, const Real &b)
    {
        return mpfr_equal_p(a.m_v, b.m_v) != 0;
    }

private:
    mpfr_t m_v;
};

Real abs(const Real &x);
Real sqrt(const Real &x);
Real exp(const Real &x);
Real log(const Real &x);
Real log1p(const Real &x);
Real sin(const Real &x);
Real cos(const Real &x);
Real atan2(const Real &y, const Real &x);
Real max(const Real &a, const Real &b);
// Reduces an angle to (-pi, pi].
Real reduce_angle(const Real &x);

// Complex number over Real, used where values are known to be O(1).
struct ComplexReal {
    Real re;
    Real im;

    explicit ComplexReal(mpfr_prec_t prec = default_precision) : re(prec), im(prec) {}
    ComplexReal(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    static ComplexReal polar(const Real &mag, const Real &phase);

    Real norm() const; // |z|^2
    Real abs() const;
    Real arg() const;

    ComplexReal &operator+=(const ComplexReal &o);
    ComplexReal &operator-=(const ComplexReal &o);
    ComplexReal &operator*=(const ComplexReal &o);
    ComplexReal &operator/=(const ComplexReal &o);

    friend ComplexReal operator+(ComplexReal a, const ComplexReal &b)
    {
        return a += b;
    }
    friend ComplexReal operator-(ComplexReal a, const ComplexReal &b)
    {
        return a -= b;
    }
    friend ComplexReal operator*(ComplexReal a, const ComplexReal &b)
    {
        return a *= b;
    }
    friend ComplexReal operator/(ComplexReal a, const ComplexReal &b)
    {
        return a /= b;
    }
};

} // namespace modfree

#endif
