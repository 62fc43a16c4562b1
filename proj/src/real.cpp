#include <modfree/real.hpp>

#include <algorithm>
#include <vector>

namespace modfree
{

namespace
{

mpfr_prec_t wider(const Real &a, const Real &b)
{
    return std::max(a.precision(), b.precision());
}

// Re-rounds `x` in place to at least `prec` bits without losing its value.
void widen(Real &x, mpfr_prec_t prec)
{
    if (x.precision() < prec) {
        mpfr_prec_round(x.get(), prec, MPFR_RNDN);
    }
}

} // namespace

Real::Real(mpfr_prec_t prec)
{
    mpfr_init2(m_v, prec);
    mpfr_set_zero(m_v, 1);
}

Real::Real(double x, mpfr_prec_t prec)
{
    mpfr_init2(m_v, prec);
    mpfr_set_d(m_v, x, MPFR_RNDN);
}

Real::Real(long x, mpfr_prec_t prec)
{
    mpfr_init2(m_v, prec);
    mpfr_set_si(m_v, x, MPFR_RNDN);
}

Real::Real(const mpz_class &x, mpfr_prec_t prec)
{
    mpfr_init2(m_v, prec);
    mpfr_set_z(m_v, x.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class &x, mpfr_prec_t prec)
{
    mpfr_init2(m_v, prec);
    mpfr_set_q(m_v, x.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real &other)
{
    mpfr_init2(m_v, other.precision());
    mpfr_set(m_v, other.m_v, MPFR_RNDN);
}

Real::Real(Real &&other) noexcept
{
    mpfr_init2(m_v, MPFR_PREC_MIN);
    mpfr_swap(m_v, other.m_v);
}

Real &Real::operator=(const Real &other)
{
    if (this != &other) {
        mpfr_set_prec(m_v, other.precision());
        mpfr_set(m_v, other.m_v, MPFR_RNDN);
    }
    return *this;
}

Real &Real::operator=(Real &&other) noexcept
{
    mpfr_swap(m_v, other.m_v);
    return *this;
}

Real::~Real()
{
    mpfr_clear(m_v);
}

Real Real::pi(mpfr_prec_t prec)
{
    Real r(prec);
    mpfr_const_pi(r.m_v, MPFR_RNDN);
    return r;
}

Real Real::infinity(int sign, mpfr_prec_t prec)
{
    Real r(prec);
    mpfr_set_inf(r.m_v, sign);
    return r;
}

std::string Real::to_string(int digits) const
{
    if (mpfr_nan_p(m_v)) {
        return "nan";
    }
    if (mpfr_inf_p(m_v)) {
        return mpfr_sgn(m_v) > 0 ? "inf" : "-inf";
    }
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits, m_v);
    return std::string(buf.data());
}

Real &Real::operator+=(const Real &o)
{
    widen(*this, o.precision());
    mpfr_add(m_v, m_v, o.m_v, MPFR_RNDN);
    return *this;
}

Real &Real::operator-=(const Real &o)
{
    widen(*this, o.precision());
    mpfr_sub(m_v, m_v, o.m_v, MPFR_RNDN);
    return *this;
}

Real &Real::operator*=(const Real &o)
{
    widen(*this, o.precision());
    mpfr_mul(m_v, m_v, o.m_v, MPFR_RNDN);
    return *this;
}

Real &Real::operator/=(const Real &o)
{
    widen(*this, o.precision());
    mpfr_div(m_v, m_v, o.m_v, MPFR_RNDN);
    return *this;
}

Real Real::operator-() const
{
    Real r(*this);
    mpfr_neg(r.m_v, r.m_v, MPFR_RNDN);
    return r;
}

#define MODFREE_UNARY(name, fn)                                                                                        \
    Real name(const Real &x)                                                                                           \
    {                                                                                                                  \
        Real r(x.precision());                                                                                         \
        fn(r.get(), x.get(), MPFR_RNDN);                                                                               \
        return r;                                                                                                      \
    }

MODFREE_UNARY(abs, mpfr_abs)
MODFREE_UNARY(sqrt, mpfr_sqrt)
MODFREE_UNARY(exp, mpfr_exp)
MODFREE_UNARY(log, mpfr_log)
MODFREE_UNARY(log1p, mpfr_log1p)
MODFREE_UNARY(sin, mpfr_sin)
MODFREE_UNARY(cos, mpfr_cos)

#undef MODFREE_UNARY

Real atan2(const Real &y, const Real &x)
{
    Real r(wider(y, x));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

Real max(const Real &a, const Real &b)
{
    return a < b ? b : a;
}

Real reduce_angle(const Real &x)
{
    const auto prec = x.precision();
    const Real two_pi = Real::pi(prec) * Real(2l, prec);
    Real r(prec);
    mpfr_remainder(r.get(), x.get(), two_pi.get(), MPFR_RNDN); // in [-pi, pi]
    if (r <= -Real::pi(prec)) {
        r += two_pi;
    }
    return r;
}

ComplexReal ComplexReal::polar(const Real &mag, const Real &phase)
{
    return {mag * cos(phase), mag * sin(phase)};
}

Real ComplexReal::norm() const
{
    return re * re + im * im;
}

Real ComplexReal::abs() const
{
    Real r(wider(re, im));
    mpfr_hypot(r.get(), re.get(), im.get(), MPFR_RNDN);
    return r;
}

Real ComplexReal::arg() const
{
    return atan2(im, re);
}

ComplexReal &ComplexReal::operator+=(const ComplexReal &o)
{
    re += o.re;
    im += o.im;
    return *this;
}

ComplexReal &ComplexReal::operator-=(const ComplexReal &o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

ComplexReal &ComplexReal::operator*=(const ComplexReal &o)
{
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

ComplexReal &ComplexReal::operator/=(const ComplexReal &o)
{
    const Real den = o.norm();
    Real r = (re * o.re + im * o.im) / den;
    Real i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

} // namespace modfree
