#include <modfree/coeffring.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

#include <modfree/errors.hpp>

namespace modfree
{

int euler_phi(int m)
{
    if (m < 1) {
        throw usage_error("euler_phi: argument must be positive");
    }
    int result = m;
    int n = m;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

namespace
{

// Exact quotient of `num` by the monic polynomial `den`.
IntPoly divide_exact_monic(IntPoly num, const IntPoly &den)
{
    const auto dn = den.size() - 1;
    IntPoly q(num.size() - dn);
    for (auto i = num.size(); i-- > dn;) {
        const mpz_class c = num[i];
        q[i - dn] = c;
        if (c != 0) {
            for (std::size_t j = 0; j <= dn; ++j) {
                num[i - dn + j] -= c * den[j];
            }
        }
    }
    return q;
}

IntPoly compute_cyclotomic(int m, std::map<int, IntPoly> &memo)
{
    if (auto it = memo.find(m); it != memo.end()) {
        return it->second;
    }
    IntPoly p(static_cast<std::size_t>(m) + 1);
    p[0] = -1;
    p[static_cast<std::size_t>(m)] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d == 0) {
            p = divide_exact_monic(std::move(p), compute_cyclotomic(d, memo));
        }
    }
    memo.emplace(m, p);
    return p;
}

} // namespace

IntPoly cyclotomic_polynomial(int m)
{
    if (m < 1) {
        throw usage_error("cyclotomic_polynomial: conductor must be positive");
    }
    std::map<int, IntPoly> memo;
    return compute_cyclotomic(m, memo);
}

class CyclotomicField
{
public:
    explicit CyclotomicField(int m) : conductor(m), phi(euler_phi(m)), modulus(cyclotomic_polynomial(m))
    {
        const auto n = static_cast<std::size_t>(phi);
        // x^k mod Phi for k in [0, max(m, 2 phi - 1)).
        const auto top = std::max<std::size_t>(static_cast<std::size_t>(m), 2 * n);
        std::vector<mpz_class> cur(n);
        cur[0] = 1;
        powers.reserve(top);
        for (std::size_t k = 0; k < top; ++k) {
            powers.push_back(cur);
            // cur *= x, then eliminate the degree-phi term.
            mpz_class carry = cur[n - 1];
            for (std::size_t i = n - 1; i > 0; --i) {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if (carry != 0) {
                for (std::size_t i = 0; i < n; ++i) {
                    cur[i] -= carry * modulus[i];
                }
            }
        }
    }

    int conductor;
    int phi;
    IntPoly modulus;
    std::vector<std::vector<mpz_class>> powers;

    // Folds a vector of length up to 2 phi - 1 into the power basis.
    void reduce(std::vector<mpz_class> &wide) const
    {
        const auto n = static_cast<std::size_t>(phi);
        for (std::size_t k = n; k < wide.size(); ++k) {
            if (wide[k] == 0) {
                continue;
            }
            const auto &img = powers[k];
            for (std::size_t i = 0; i < n; ++i) {
                if (img[i] != 0) {
                    wide[i] += wide[k] * img[i];
                }
            }
        }
        wide.resize(n);
    }
};

const CyclotomicField &cyclotomic_field(int m)
{
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<CyclotomicField>> registry;
    if (m < 1) {
        throw usage_error("cyclotomic field conductor must be positive");
    }
    std::lock_guard lock(mtx);
    auto &slot = registry[m];
    if (!slot) {
        slot = std::make_unique<CyclotomicField>(m);
    }
    return *slot;
}

CycNum::CycNum() : CycNum(1) {}

CycNum::CycNum(int conductor)
    : m_field(&cyclotomic_field(conductor)), m_num(static_cast<std::size_t>(m_field->phi)), m_den(1)
{
}

CycNum::CycNum(int conductor, const Rational &x) : CycNum(conductor)
{
    if (x.get_den() == 0) {
        throw division_by_zero("CycNum: zero denominator");
    }
    m_num[0] = x.get_num();
    m_den = x.get_den();
    normalize();
}

CycNum::CycNum(int conductor, long x) : CycNum(conductor)
{
    m_num[0] = x;
}

CycNum::CycNum(int conductor, std::span<const Rational> coords) : CycNum(conductor)
{
    if (coords.size() != m_num.size()) {
        throw usage_error("CycNum: expected " + std::to_string(m_num.size()) + " coordinates, got "
                          + std::to_string(coords.size()));
    }
    for (const auto &c : coords) {
        mpz_lcm(m_den.get_mpz_t(), m_den.get_mpz_t(), c.get_den_mpz_t());
    }
    for (std::size_t i = 0; i < coords.size(); ++i) {
        m_num[i] = coords[i].get_num() * (m_den / coords[i].get_den());
    }
    normalize();
}

CycNum::CycNum(const CyclotomicField *f, std::vector<mpz_class> num, mpz_class den)
    : m_field(f), m_num(std::move(num)), m_den(std::move(den))
{
    normalize();
}

int CycNum::conductor() const noexcept
{
    return m_field->conductor;
}

Rational CycNum::coord(int i) const
{
    Rational r(m_num.at(static_cast<std::size_t>(i)), m_den);
    r.canonicalize();
    return r;
}

std::vector<Rational> CycNum::coords() const
{
    std::vector<Rational> out;
    out.reserve(m_num.size());
    for (int i = 0; i < degree(); ++i) {
        out.push_back(coord(i));
    }
    return out;
}

bool CycNum::is_zero() const noexcept
{
    return std::all_of(m_num.begin(), m_num.end(), [](const mpz_class &x) { return x == 0; });
}

bool CycNum::is_rational() const noexcept
{
    return std::all_of(m_num.begin() + 1, m_num.end(), [](const mpz_class &x) { return x == 0; });
}

void CycNum::normalize()
{
    if (m_den < 0) {
        m_den = -m_den;
        for (auto &x : m_num) {
            x = -x;
        }
    }
    if (m_den == 1) {
        return;
    }
    mpz_class g = m_den;
    for (const auto &x : m_num) {
        if (g == 1) {
            break;
        }
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (is_zero()) {
        m_den = 1;
        return;
    }
    if (g != 1) {
        for (auto &x : m_num) {
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        }
        mpz_divexact(m_den.get_mpz_t(), m_den.get_mpz_t(), g.get_mpz_t());
    }
}

void CycNum::check_same_field(const CycNum &o) const
{
    if (m_field != o.m_field) {
        throw usage_error("CycNum: conductor mismatch (" + std::to_string(conductor()) + " vs "
                          + std::to_string(o.conductor()) + ")");
    }
}

CycNum &CycNum::operator+=(const CycNum &o)
{
    check_same_field(o);
    if (m_den == o.m_den) {
        for (std::size_t i = 0; i < m_num.size(); ++i) {
            m_num[i] += o.m_num[i];
        }
    } else {
        for (std::size_t i = 0; i < m_num.size(); ++i) {
            m_num[i] = m_num[i] * o.m_den + o.m_num[i] * m_den;
        }
        m_den *= o.m_den;
    }
    normalize();
    return *this;
}

CycNum &CycNum::operator-=(const CycNum &o)
{
    return *this += -o;
}

CycNum CycNum::operator-() const
{
    CycNum r(*this);
    for (auto &x : r.m_num) {
        x = -x;
    }
    return r;
}

CycNum &CycNum::operator*=(const CycNum &o)
{
    check_same_field(o);
    const auto n = m_num.size();
    std::vector<mpz_class> wide(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (m_num[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            mpz_addmul(wide[i + j].get_mpz_t(), m_num[i].get_mpz_t(), o.m_num[j].get_mpz_t());
        }
    }
    m_field->reduce(wide);
    m_num = std::move(wide);
    m_den *= o.m_den;
    normalize();
    return *this;
}

CycNum &CycNum::operator*=(const mpz_class &k)
{
    for (auto &x : m_num) {
        x *= k;
    }
    normalize();
    return *this;
}

bool operator==(const CycNum &a, const CycNum &b)
{
    return a.m_field == b.m_field && a.m_den == b.m_den && a.m_num == b.m_num;
}

namespace
{

using QPoly = std::vector<Rational>;

void trim(QPoly &p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

// Returns (quotient, remainder) of a / b over Q; b must be nonzero and trimmed.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly &b)
{
    trim(a);
    if (a.size() < b.size()) {
        return {QPoly{}, a};
    }
    QPoly q(a.size() - b.size() + 1);
    const Rational &lead = b.back();
    for (std::size_t top = a.size(); top >= b.size(); --top) {
        const std::size_t pos = top - b.size();
        const Rational c = a[top - 1] / lead;
        q[pos] = c;
        if (c != 0) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                a[pos + j] -= c * b[j];
            }
        }
    }
    trim(a);
    return {q, a};
}

QPoly mul_poly(const QPoly &a, const QPoly &b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    QPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

QPoly sub_poly(QPoly a, const QPoly &b)
{
    a.resize(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] -= b[i];
    }
    trim(a);
    return a;
}

} // namespace

CycNum CycNum::inverse() const
{
    if (is_zero()) {
        throw division_by_zero("CycNum: inverse of zero");
    }
    if (is_rational()) {
        Rational inv(m_den, m_num[0]);
        inv.canonicalize();
        return CycNum(conductor(), inv);
    }
    // Extended Euclid on (Phi, a): invariant s_i * a == r_i (mod Phi).
    QPoly r0(m_field->modulus.begin(), m_field->modulus.end());
    QPoly r1(m_num.begin(), m_num.end());
    trim(r1);
    QPoly s0;
    QPoly s1{Rational(1)};
    while (r1.size() > 1) {
        auto [q, rem] = divmod(r0, r1);
        QPoly s2 = sub_poly(s0, mul_poly(q, s1));
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r1 is a nonzero constant because Phi is irreducible and a != 0 mod Phi.
    const Rational c = r1.at(0);
    CycNum acc(conductor());
    for (std::size_t k = 0; k < s1.size(); ++k) {
        if (s1[k] == 0) {
            continue;
        }
        CycNum term(conductor(), s1[k] / c);
        acc += term * root_of_unity(conductor(), static_cast<long>(k));
    }
    Rational scale(m_den);
    return acc * CycNum(conductor(), scale);
}

CycNum CycNum::pow(long e) const
{
    if (e < 0) {
        return inverse().pow(-e);
    }
    CycNum result(conductor(), 1l);
    CycNum base(*this);
    while (e > 0) {
        if (e & 1) {
            result *= base;
        }
        e >>= 1;
        if (e > 0) {
            base *= base;
        }
    }
    return result;
}

std::string CycNum::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < degree(); ++i) {
        const Rational c = coord(i);
        if (c == 0) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        os << "(" << c.get_str() << ")";
        if (i > 0) {
            os << "*z" << conductor() << "^" << i;
        }
    }
    if (first) {
        os << "0";
    }
    return os.str();
}

CycNum root_of_unity(int m, long k)
{
    const auto &f = cyclotomic_field(m);
    long r = k % m;
    if (r < 0) {
        r += m;
    }
    return CycNum(&f, f.powers[static_cast<std::size_t>(r)], mpz_class(1));
}

ProductAccumulator::ProductAccumulator(int conductor)
    : m_field(&cyclotomic_field(conductor)), m_wide(2 * static_cast<std::size_t>(m_field->phi) - 1), m_den(1)
{
}

void ProductAccumulator::add_product(const CycNum &a, const CycNum &b)
{
    if (a.m_field != m_field || b.m_field != m_field) {
        throw usage_error("ProductAccumulator: conductor mismatch");
    }
    const auto n = a.m_num.size();
    const bool unit_dens = a.m_den == 1 && b.m_den == 1;
    if (m_empty) {
        m_den = unit_dens ? mpz_class(1) : mpz_class(a.m_den * b.m_den);
        m_empty = false;
    }
    // Multiplier applied to this product so that it sits over m_den.
    mpz_class *scale = nullptr;
    if (!(unit_dens && m_den == 1)) {
        const mpz_class d = a.m_den * b.m_den;
        if (d != m_den) {
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), m_den.get_mpz_t(), d.get_mpz_t());
            if (l != m_den) {
                const mpz_class up = l / m_den;
                for (auto &x : m_wide) {
                    x *= up;
                }
                m_den = l;
            }
            m_scratch = m_den / d;
            if (m_scratch != 1) {
                scale = &m_scratch;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (a.m_num[i] == 0) {
            continue;
        }
        if (scale != nullptr) {
            const mpz_class ai = a.m_num[i] * *scale;
            for (std::size_t j = 0; j < n; ++j) {
                mpz_addmul(m_wide[i + j].get_mpz_t(), ai.get_mpz_t(), b.m_num[j].get_mpz_t());
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                mpz_addmul(m_wide[i + j].get_mpz_t(), a.m_num[i].get_mpz_t(), b.m_num[j].get_mpz_t());
            }
        }
    }
}

CycNum ProductAccumulator::take()
{
    std::vector<mpz_class> wide(m_wide.size());
    std::swap(wide, m_wide);
    m_field->reduce(wide);
    CycNum out(m_field, std::move(wide), m_den);
    m_den = 1;
    m_empty = true;
    return out;
}

ComplexEstimate embed_complex(const CycNum &a, mpfr_prec_t prec)
{
    const int m = a.conductor();
    const Real two_pi_over_m = Real::pi(prec) * Real(2l, prec) / Real(static_cast<long>(m), prec);
    ComplexReal sum(prec);
    double magnitude = 0.0;
    for (int i = 0; i < a.degree(); ++i) {
        const Rational c = a.coord(i);
        if (c == 0) {
            continue;
        }
        const Real cr(c, prec);
        const Real angle = two_pi_over_m * Real(static_cast<long>(i), prec);
        sum.re += cr * cos(angle);
        sum.im += cr * sin(angle);
        magnitude += std::fabs(cr.to_double());
    }
    // Each term carries a few roundings (coefficient, angle, cos/sin, product, sum).
    const double err = magnitude * (8.0 + 2.0 * a.degree()) * std::ldexp(1.0, -static_cast<int>(prec));
    return {std::move(sum), err};
}

} // namespace modfree
