#include "fkg/series.hpp"

#include "fkg/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace fkg {

IntPartition::IntPartition(std::vector<int> parts) : parts_(std::move(parts)), sum_(0) {
    if (parts_.empty()) throw InputError("partition: empty part list");
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 1) throw InputError("partition: parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw InputError("partition: parts must be weakly decreasing");
        sum_ += parts_[i];
    }
}

std::vector<IntPartition> partitions_of(int n) {
    if (n < 1) throw InputError("partitions: n must be at least 1");
    if (n > kPartitionsOfCap) {
        throw BudgetError("partitions: n=" + std::to_string(n) + " exceeds cap " +
                          std::to_string(kPartitionsOfCap));
    }
    std::vector<IntPartition> out;
    std::vector<int> parts;
    // Largest first part first gives reverse-lexicographic order.
    std::function<void(int, int)> rec = [&](int rest, int max_part) {
        if (rest == 0) {
            out.emplace_back(parts);
            return;
        }
        for (int p = std::min(rest, max_part); p >= 1; --p) {
            parts.push_back(p);
            rec(rest - p, p);
            parts.pop_back();
        }
    };
    rec(n, n);
    return out;
}

Int z_lambda(const IntPartition& lam) {
    Int z(1);
    int run_value = 0;
    int run_length = 0;
    const auto flush = [&] {
        for (int t = 1; t <= run_length; ++t) z *= run_value * t;  // i^{m_i} m_i! interleaved
    };
    for (int part : lam.parts()) {
        if (part != run_value) {
            flush();
            run_value = part;
            run_length = 1;
        } else {
            ++run_length;
        }
    }
    flush();
    const Int nfact = factorial(static_cast<unsigned>(lam.sum()));
    if (!mpz_divisible_p(nfact.get_mpz_t(), z.get_mpz_t()))
        throw EngineBug("z_lambda: " + z.get_str() + " does not divide " + nfact.get_str());
    return z;
}

Rat moment(const GridFunction& f, int d) {
    if (d < 1) throw InputError("moment: degree must be at least 1");
    Rat sum(0);
    for (std::size_t c = 0; c < f.cell_total(); ++c) sum += rat_pow(f.cell(c), static_cast<unsigned>(d));
    return sum / Rat(static_cast<long>(f.cell_total()));
}

MomentVector::MomentVector(const GridFunction& f, int max_degree) {
    if (max_degree < 1) throw InputError("moments: degree must be at least 1");
    const std::size_t cells = f.cell_total();
    const Rat denom(static_cast<long>(cells));
    p_.assign(static_cast<std::size_t>(max_degree) + 1, Rat(0));
    p_[0] = 1;
    std::vector<Rat> powers(cells, Rat(1));
    for (int d = 1; d <= max_degree; ++d) {
        Rat sum(0);
        for (std::size_t c = 0; c < cells; ++c) {
            powers[c] *= f.cell(c);
            sum += powers[c];
        }
        p_[static_cast<std::size_t>(d)] = sum / denom;
    }
}

const Rat& MomentVector::p(int d) const {
    if (d < 0 || d > max_degree()) throw InputError("moments: degree out of range");
    return p_[static_cast<std::size_t>(d)];
}

Rat MomentVector::p_lambda(const IntPartition& lam) const {
    Rat prod(1);
    for (int part : lam.parts()) prod *= p(part);
    return prod;
}

Rat en_equal(const GridFunction& f, int n) {
    if (n < 1) throw InputError("equal-function sum: n must be at least 1");
    const MomentVector moments(f, n);
    const Int nfact = factorial(static_cast<unsigned>(n));
    Rat sum(0);
    for (const IntPartition& lam : partitions_of(n)) {
        Int class_size = nfact / z_lambda(lam);
        Rat term = moments.p_lambda(lam) * Rat(class_size);
        if ((lam.length() - 1) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum;
}

TruncatedSeries::TruncatedSeries(int degree_cap) {
    if (degree_cap < 0) throw InputError("series: negative degree cap");
    coeffs_.assign(static_cast<std::size_t>(degree_cap) + 1, Rat(0));
}

TruncatedSeries::TruncatedSeries(int degree_cap, std::vector<Rat> coeffs)
    : coeffs_(std::move(coeffs)) {
    if (degree_cap < 0) throw InputError("series: negative degree cap");
    if (coeffs_.size() != static_cast<std::size_t>(degree_cap) + 1)
        throw InputError("series: expected " + std::to_string(degree_cap + 1) + " coefficients");
}

TruncatedSeries TruncatedSeries::one(int degree_cap) {
    TruncatedSeries s(degree_cap);
    s.coeffs_[0] = 1;
    return s;
}

const Rat& TruncatedSeries::coeff(int d) const {
    if (d < 0 || d > degree_cap()) throw InputError("series: degree out of range");
    return coeffs_[static_cast<std::size_t>(d)];
}

void TruncatedSeries::set_coeff(int d, Rat value) {
    if (d < 0 || d > degree_cap()) throw InputError("series: degree out of range");
    coeffs_[static_cast<std::size_t>(d)] = std::move(value);
}

namespace {

void require_same_cap(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.degree_cap() != b.degree_cap())
        throw InputError("series: mismatched degree caps");
}

} // namespace

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& other) const {
    require_same_cap(*this, other);
    TruncatedSeries out(degree_cap());
    for (int d = 0; d <= degree_cap(); ++d) out.coeffs_[static_cast<std::size_t>(d)] =
        coeffs_[static_cast<std::size_t>(d)] + other.coeffs_[static_cast<std::size_t>(d)];
    return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& other) const {
    require_same_cap(*this, other);
    TruncatedSeries out(degree_cap());
    for (int d = 0; d <= degree_cap(); ++d) out.coeffs_[static_cast<std::size_t>(d)] =
        coeffs_[static_cast<std::size_t>(d)] - other.coeffs_[static_cast<std::size_t>(d)];
    return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& other) const {
    require_same_cap(*this, other);
    TruncatedSeries out(degree_cap());
    for (int i = 0; i <= degree_cap(); ++i) {
        const Rat& a = coeffs_[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        for (int j = 0; i + j <= degree_cap(); ++j) {
            const Rat& b = other.coeffs_[static_cast<std::size_t>(j)];
            if (b == 0) continue;
            out.coeffs_[static_cast<std::size_t>(i + j)] += a * b;
        }
    }
    return out;
}

TruncatedSeries series_log(const TruncatedSeries& f) {
    if (f.coeff(0) != 1) throw InputError("series log: constant term must be 1");
    const int cap = f.degree_cap();
    TruncatedSeries log_f(cap);
    // From F' = F (log F)': k F_k = sum_{j=1..k} j L_j F_{k-j}.
    for (int k = 1; k <= cap; ++k) {
        Rat acc = f.coeff(k);
        for (int j = 1; j < k; ++j) acc -= Rat(j) * log_f.coeff(j) * f.coeff(k - j) / Rat(k);
        log_f.set_coeff(k, std::move(acc));
    }
    return log_f;
}

TruncatedSeries series_exp(const TruncatedSeries& z) {
    if (z.coeff(0) != 0) throw InputError("series exp: constant term must be 0");
    const int cap = z.degree_cap();
    TruncatedSeries exp_z = TruncatedSeries::one(cap);
    // From (exp Z)' = Z' exp Z: k E_k = sum_{j=1..k} j Z_j E_{k-j}.
    for (int k = 1; k <= cap; ++k) {
        Rat acc(0);
        for (int j = 1; j <= k; ++j) acc += Rat(j) * z.coeff(j) * exp_z.coeff(k - j);
        exp_z.set_coeff(k, acc / Rat(k));
    }
    return exp_z;
}

GridSeries::GridSeries(int m, int degree_cap) : m_(m), degree_cap_(degree_cap) {
    if (m < 1) throw InputError("grid series: resolution must be positive");
    if (degree_cap < 0) throw InputError("grid series: negative degree cap");
    cells_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m),
                  TruncatedSeries::one(degree_cap));
}

GridSeries GridSeries::one_minus_terms(std::span<const GridFunction> fs,
                                       std::span<const int> exponents, int degree_cap) {
    if (fs.empty()) throw InputError("grid series: empty function list");
    if (fs.size() != exponents.size())
        throw InputError("grid series: one exponent per function required");
    const int m = fs.front().m();
    for (const GridFunction& f : fs)
        if (f.m() != m)
            throw InputError("grid series: mismatched resolution " + std::to_string(m) + " vs " +
                             std::to_string(f.m()));
    std::vector<bool> used(static_cast<std::size_t>(degree_cap) + 1, false);
    for (int e : exponents) {
        if (e < 1 || e > degree_cap)
            throw InputError("grid series: exponent " + std::to_string(e) +
                             " outside [1, " + std::to_string(degree_cap) + "]");
        if (used[static_cast<std::size_t>(e)])
            throw InputError("grid series: repeated exponent " + std::to_string(e));
        used[static_cast<std::size_t>(e)] = true;
    }
    GridSeries out(m, degree_cap);
    for (std::size_t c = 0; c < out.cells_.size(); ++c) {
        for (std::size_t j = 0; j < fs.size(); ++j) {
            out.cells_[c].set_coeff(exponents[j], -fs[j].cell(c));
        }
    }
    return out;
}

GridSeries GridSeries::cellwise_log() const {
    GridSeries out(m_, degree_cap_);
    for (std::size_t c = 0; c < cells_.size(); ++c) out.cells_[c] = series_log(cells_[c]);
    return out;
}

TruncatedSeries GridSeries::expect() const {
    TruncatedSeries sum(degree_cap_);
    for (const TruncatedSeries& s : cells_) sum = sum + s;
    const Rat denom(static_cast<long>(cells_.size()));
    TruncatedSeries out(degree_cap_);
    for (int d = 0; d <= degree_cap_; ++d) out.set_coeff(d, sum.coeff(d) / denom);
    return out;
}

std::vector<Rat> geometric_mean_coeffs(std::span<const GridFunction> fs, int degree) {
    if (degree < 1) throw InputError("geometric mean: degree must be at least 1");
    if (fs.empty()) throw InputError("geometric mean: empty function list");
    // f_j rides t^j; terms beyond the degree cap cannot influence c_1..c_D.
    std::vector<GridFunction> kept;
    std::vector<int> exponents;
    for (std::size_t j = 0; j < fs.size(); ++j) {
        if (static_cast<int>(j) + 1 > degree) break;
        kept.push_back(fs[j]);
        exponents.push_back(static_cast<int>(j) + 1);
    }
    const int m = fs.front().m();
    for (const GridFunction& f : fs)
        if (f.m() != m)
            throw InputError("geometric mean: mismatched resolution " + std::to_string(m) +
                             " vs " + std::to_string(f.m()));
    TruncatedSeries g = TruncatedSeries::one(degree);
    if (!kept.empty()) {
        const GridSeries f_series = GridSeries::one_minus_terms(kept, exponents, degree);
        g = series_exp(f_series.cellwise_log().expect());
    }
    std::vector<Rat> c;
    c.reserve(static_cast<std::size_t>(degree));
    for (int d = 1; d <= degree; ++d) c.push_back(-g.coeff(d));
    return c;
}

PrimesEncoding primes_encoding(int n) {
    static constexpr int kPrimes[kPrimesEncodingCap] = {2, 3, 5, 7, 11, 13, 17, 19};
    if (n < 1) throw InputError("primes encoding: n must be at least 1");
    if (n > kPrimesEncodingCap) {
        throw BudgetError("primes encoding: n=" + std::to_string(n) + " exceeds cap " +
                          std::to_string(kPrimesEncodingCap));
    }
    long long k = 1;
    for (int j = 0; j < n; ++j) k *= kPrimes[j];
    PrimesEncoding enc;
    enc.n = n;
    enc.k.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        enc.k.push_back(k / kPrimes[j]);
        enc.target += enc.k.back();
    }
    if (n <= 4) {
        // The isolation property: s . k = N has the single solution (1,...,1).
        long long solutions = 0;
        std::function<void(int, long long, bool)> rec = [&](int j, long long rest, bool all_one) {
            if (j == n) {
                if (rest == 0) ++solutions;
                if (rest == 0 && !all_one)
                    throw EngineBug("primes encoding: non-unit solution of the degree equation");
                return;
            }
            for (long long s = 0; s * enc.k[static_cast<std::size_t>(j)] <= rest; ++s)
                rec(j + 1, rest - s * enc.k[static_cast<std::size_t>(j)], all_one && s == 1);
        };
        rec(0, enc.target, true);
        if (solutions != 1) throw EngineBug("primes encoding: degree equation not uniquely solvable");
    }
    return enc;
}

Rat extract_en_via_series(std::span<const GridFunction> fs, bool allow_large) {
    const int n = static_cast<int>(fs.size());
    if (n < 1) throw InputError("series equivalence: empty function list");
    if (n > 4)
        throw BudgetError("series equivalence: n=" + std::to_string(n) + " not supported (max 4)");
    if (n == 4 && !allow_large)
        throw BudgetError("series equivalence: n=4 needs the large-degree override (degree 247)");
    const PrimesEncoding enc = primes_encoding(n);
    std::vector<int> exponents;
    exponents.reserve(static_cast<std::size_t>(n));
    for (long long kj : enc.k) exponents.push_back(static_cast<int>(kj));
    const int cap = static_cast<int>(enc.target);
    const GridSeries f_series = GridSeries::one_minus_terms(fs, exponents, cap);
    const TruncatedSeries g = series_exp(f_series.cellwise_log().expect());
    // 1 - G(F) carries E_n at t^N, with all lower mixed terms killed by the
    // uniqueness of the exponent equation.
    return -g.coeff(cap);
}

} // namespace fkg
