#ifndef MODFREE_COEFFRING_HPP
#define MODFREE_COEFFRING_HPP

#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <modfree/real.hpp>

namespace modfree
{

using Rational = mpq_class;

// num/den in canonical form; mpq_class(num, den) alone does not reduce.
inline Rational make_rational(long num, long den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}
// Dense integer polynomial, coefficients from degree 0 upwards.
using IntPoly = std::vector<mpz_class>;

int euler_phi(int m);

// Phi_m, obtained by exact division of x^m - 1 by Phi_d for every proper divisor d of m.
IntPoly cyclotomic_polynomial(int m);

class CyclotomicField;

// Per-conductor reduction data (Phi_m and the images of x^k mod Phi_m). Built once
// and shared; the returned reference stays valid for the life of the program.
const CyclotomicField &cyclotomic_field(int m);

// Element of Q(zeta_m), stored in the power basis 1, zeta, ..., zeta^(phi(m)-1)
// as an integer numerator vector over a single positive denominator with
// gcd(content, denominator) = 1. Two elements are equal iff their stored forms are.
class CycNum
{
public:
    CycNum();
    explicit CycNum(int conductor);
    CycNum(int conductor, const Rational &x);
    CycNum(int conductor, long x);
    CycNum(int conductor, std::span<const Rational> coords);

    int conductor() const noexcept;
    int degree() const noexcept
    {
        return static_cast<int>(m_num.size());
    }
    Rational coord(int i) const;
    std::vector<Rational> coords() const;
    const std::vector<mpz_class> &numerators() const noexcept
    {
        return m_num;
    }
    const mpz_class &denominator() const noexcept
    {
        return m_den;
    }

    bool is_zero() const noexcept;
    bool is_rational() const noexcept;

    CycNum &operator+=(const CycNum &o);
    CycNum &operator-=(const CycNum &o);
    CycNum &operator*=(const CycNum &o);
    CycNum &operator*=(const mpz_class &k);
    CycNum &operator/=(const CycNum &o)
    {
        return *this *= o.inverse();
    }
    CycNum operator-() const;

    friend CycNum operator+(CycNum a, const CycNum &b)
    {
        return a += b;
    }
    friend CycNum operator-(CycNum a, const CycNum &b)
    {
        return a -= b;
    }
    friend CycNum operator*(CycNum a, const CycNum &b)
    {
        return a *= b;
    }
    friend CycNum operator/(CycNum a, const CycNum &b)
    {
        return a /= b;
    }
    friend bool operator==(const CycNum &a, const CycNum &b);

    // Throws division_by_zero for the zero element.
    CycNum inverse() const;
    CycNum pow(long e) const;

    std::string to_string() const;

private:
    friend class ProductAccumulator;
    friend CycNum root_of_unity(int m, long k);
    CycNum(const CyclotomicField *f, std::vector<mpz_class> num, mpz_class den);
    void normalize();
    void check_same_field(const CycNum &o) const;

    const CyclotomicField *m_field;
    std::vector<mpz_class> m_num;
    mpz_class m_den;
};

// zeta_m^k reduced mod Phi_m.
CycNum root_of_unity(int m, long k);

// Accumulates sums of products without reducing each product mod Phi_m.
// Used by series convolution, where many products land on one coefficient.
class ProductAccumulator
{
public:
    explicit ProductAccumulator(int conductor);

    void add_product(const CycNum &a, const CycNum &b);
    // Reduces, normalizes and returns the sum; resets the accumulator.
    CycNum take();

private:
    const CyclotomicField *m_field;
    std::vector<mpz_class> m_wide;
    mpz_class m_den;
    mpz_class m_scratch;
    bool m_empty = true;
};

struct ComplexEstimate {
    ComplexReal value;
    // Forward estimate of the absolute error of `value` (each component).
    double err;
};

// Image of `a` under zeta_m -> exp(2 pi i / m), evaluated at `prec` bits.
ComplexEstimate embed_complex(const CycNum &a, mpfr_prec_t prec);

} // namespace modfree

#endif
