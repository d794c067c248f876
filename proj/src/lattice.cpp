#include "fkg/lattice.hpp"

#include "fkg/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fkg {

namespace {

long square(int m) { return static_cast<long>(m) * m; }

void require_resolution(int m) {
    if (m < 1) throw InputError("grid resolution must be positive, got " + std::to_string(m));
}

} // namespace

StaircaseSeq::StaircaseSeq(int m, std::vector<int> values) : m_(m), values_(std::move(values)) {
    require_resolution(m);
    if (values_.size() != static_cast<std::size_t>(m_)) {
        std::ostringstream os;
        os << "staircase: expected " << m_ << " entries, got " << values_.size();
        throw InputError(os.str());
    }
    for (int i = 1; i <= m_; ++i) {
        const int v = value(i);
        if (v < 0 || v > m_) {
            std::ostringstream os;
            os << "staircase: entry out of range [0," << m_ << "] at index " << i;
            throw InputError(os.str());
        }
    }
    for (int i = 1; i < m_; ++i) {
        if (value(i) < value(i + 1)) {
            std::ostringstream os;
            os << "staircase: not weakly decreasing at index " << i;
            throw InputError(os.str());
        }
    }
}

StaircaseSeq StaircaseSeq::constant(int m, int value) {
    return StaircaseSeq(m, std::vector<int>(static_cast<std::size_t>(m), value));
}

Rat StaircaseSeq::expect() const {
    const long sum = std::accumulate(values_.begin(), values_.end(), 0L);
    Rat q(sum, square(m_));
    q.canonicalize();
    return q;
}

bool StaircaseSeq::is_constant() const {
    return std::all_of(values_.begin(), values_.end(),
                       [&](int v) { return v == values_.front(); });
}

bool StaircaseSeq::has_descent_at(int i) const {
    if (i < 1 || i >= m_) return false;
    return value(i) > value(i + 1);
}

std::vector<int> StaircaseSeq::descents() const {
    std::vector<int> out;
    for (int i = 1; i < m_; ++i)
        if (value(i) > value(i + 1)) out.push_back(i);
    return out;
}

bool StaircaseSeq::operator<(const StaircaseSeq& other) const {
    if (m_ != other.m_) return m_ < other.m_;
    return values_ < other.values_;
}

StaircaseSeq perturb(const StaircaseSeq& a, int i, PerturbKind kind) {
    if (i < 1 || i >= a.m())
        throw InputError("perturb: index " + std::to_string(i) + " outside [1," +
                         std::to_string(a.m() - 1) + "]");
    if (!a.has_descent_at(i))
        throw InputError("perturb: no descent at index " + std::to_string(i));
    std::vector<int> v = a.values();
    switch (kind) {
        case PerturbKind::minus: v[i - 1] = v[i]; break;
        case PerturbKind::plus: v[i] = v[i - 1]; break;
        case PerturbKind::star: v[i] += 1; break;
    }
    return StaircaseSeq(a.m(), std::move(v));
}

StaircaseSeq staircase_meet(const StaircaseSeq& a, const StaircaseSeq& b) {
    if (a.m() != b.m())
        throw InputError("meet: mismatched resolution " + std::to_string(a.m()) + " vs " +
                         std::to_string(b.m()));
    std::vector<int> v(static_cast<std::size_t>(a.m()));
    for (int i = 1; i <= a.m(); ++i)
        v[i - 1] = std::min(a.value(i), b.value(i));
    return StaircaseSeq(a.m(), std::move(v));
}

StaircaseSeq refine(const StaircaseSeq& a, int t) {
    if (t < 1) throw InputError("refine: factor must be >= 1");
    std::vector<int> v;
    v.reserve(static_cast<std::size_t>(a.m()) * t);
    for (int i = 1; i <= a.m(); ++i)
        for (int s = 0; s < t; ++s) v.push_back(t * a.value(i));
    return StaircaseSeq(a.m() * t, std::move(v));
}

StaircaseSeq discretize_monotone(const MonotonePredicate& pred, int m) {
    require_resolution(m);
    std::vector<int> v(static_cast<std::size_t>(m), 0);
    for (int i = 1; i <= m; ++i) {
        const Rat x(i, m);
        int a = 0;
        for (int j = m; j >= 1; --j) {
            if (pred(x, Rat(j, m))) {
                a = j;
                break;
            }
        }
        v[i - 1] = a;
    }
    return StaircaseSeq(m, std::move(v));  // non-monotone pred fails validation here
}

GridIndicator::GridIndicator(int m, boost::dynamic_bitset<> bits) : m_(m), bits_(std::move(bits)) {}

GridIndicator::GridIndicator(int m, const std::vector<std::pair<int, int>>& cells)
    : m_(m), bits_(static_cast<std::size_t>(square(m < 1 ? 1 : m))) {
    require_resolution(m);
    for (const auto& [i, j] : cells) {
        if (i < 1 || i > m_ || j < 1 || j > m_) {
            std::ostringstream os;
            os << "indicator: cell (" << i << "," << j << ") outside the " << m_ << "x" << m_
               << " grid";
            throw InputError(os.str());
        }
        bits_.set(static_cast<std::size_t>(i - 1) * m_ + (j - 1));
    }
}

GridIndicator GridIndicator::empty(int m) {
    require_resolution(m);
    return GridIndicator(m, boost::dynamic_bitset<>(static_cast<std::size_t>(square(m))));
}

GridIndicator GridIndicator::from_staircase(const StaircaseSeq& a) {
    boost::dynamic_bitset<> bits(static_cast<std::size_t>(square(a.m())));
    for (int i = 1; i <= a.m(); ++i)
        for (int j = 1; j <= a.value(i); ++j)
            bits.set(static_cast<std::size_t>(i - 1) * a.m() + (j - 1));
    return GridIndicator(a.m(), std::move(bits));
}

GridIndicator indicator_from_bits(int m, boost::dynamic_bitset<> bits) {
    return GridIndicator(m, std::move(bits));
}

bool GridIndicator::contains(int i, int j) const {
    return bits_.test(static_cast<std::size_t>(i - 1) * m_ + (j - 1));
}

GridIndicator GridIndicator::complement() const {
    return GridIndicator(m_, ~bits_);
}

bool GridIndicator::disjoint_with(const GridIndicator& other) const {
    return !bits_.intersects(other.bits_);
}

std::vector<std::pair<int, int>> GridIndicator::sorted_cells() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(bits_.count());
    for (std::size_t pos = bits_.find_first(); pos != boost::dynamic_bitset<>::npos;
         pos = bits_.find_next(pos)) {
        out.emplace_back(static_cast<int>(pos) / m_ + 1, static_cast<int>(pos) % m_ + 1);
    }
    return out;
}

Rat product_expect(std::span<const StaircaseSeq> fs) {
    if (fs.empty()) throw InputError("product_expect: empty function list");
    StaircaseSeq acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = staircase_meet(acc, fs[i]);
    return acc.expect();
}

Rat product_expect(std::span<const GridIndicator> fs) {
    if (fs.empty()) throw InputError("product_expect: empty function list");
    const int m = fs.front().m();
    boost::dynamic_bitset<> acc = fs.front().bits();
    for (std::size_t i = 1; i < fs.size(); ++i) {
        if (fs[i].m() != m)
            throw InputError("product_expect: mismatched resolution " + std::to_string(m) +
                             " vs " + std::to_string(fs[i].m()));
        acc &= fs[i].bits();
    }
    Rat q(static_cast<long>(acc.count()), square(m));
    q.canonicalize();
    return q;
}

GridFunction::GridFunction(int m, std::vector<Rat> values, bool monotone)
    : m_(m), values_(std::move(values)), monotone_(monotone) {
    require_resolution(m);
    if (values_.size() != static_cast<std::size_t>(square(m_))) {
        std::ostringstream os;
        os << "grid function: expected " << square(m_) << " cell values, got " << values_.size();
        throw InputError(os.str());
    }
    for (int i = 1; i <= m_; ++i)
        for (int j = 1; j <= m_; ++j)
            if (at(i, j) < 0) {
                std::ostringstream os;
                os << "grid function: negative value at cell (" << i << "," << j << ")";
                throw InputError(os.str());
            }
    if (monotone_) {
        for (int i = 1; i <= m_; ++i)
            for (int j = 1; j <= m_; ++j) {
                if (i < m_ && at(i, j) < at(i + 1, j))
                    throw InputError("grid function: monotone flag violated along axis 1 at cell (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
                if (j < m_ && at(i, j) < at(i, j + 1))
                    throw InputError("grid function: monotone flag violated along axis 2 at cell (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            }
    }
}

GridFunction GridFunction::constant(int m, const Rat& value) {
    return GridFunction(m, std::vector<Rat>(static_cast<std::size_t>(square(m < 1 ? 1 : m)), value),
                        true);
}

GridFunction GridFunction::from_staircase(const StaircaseSeq& a) {
    std::vector<Rat> v(static_cast<std::size_t>(square(a.m())), Rat(0));
    for (int i = 1; i <= a.m(); ++i)
        for (int j = 1; j <= a.value(i); ++j)
            v[static_cast<std::size_t>(i - 1) * a.m() + (j - 1)] = 1;
    return GridFunction(a.m(), std::move(v), true);
}

GridFunction GridFunction::from_indicator(const GridIndicator& s) {
    std::vector<Rat> v(static_cast<std::size_t>(square(s.m())), Rat(0));
    for (std::size_t pos = s.bits().find_first(); pos != boost::dynamic_bitset<>::npos;
         pos = s.bits().find_next(pos))
        v[pos] = 1;
    return GridFunction(s.m(), std::move(v), false);
}

const Rat& GridFunction::at(int i, int j) const {
    return values_[static_cast<std::size_t>(i - 1) * m_ + (j - 1)];
}

Rat GridFunction::expect() const {
    Rat sum(0);
    for (const Rat& v : values_) sum += v;
    return sum / Rat(square(m_));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
    if (m_ != other.m_)
        throw InputError("grid function: mismatched resolution in sum");
    std::vector<Rat> v(values_.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx) v[idx] = values_[idx] + other.values_[idx];
    return GridFunction(m_, std::move(v), monotone_ && other.monotone_);
}

GridFunction GridFunction::scaled(const Rat& factor) const {
    if (factor < 0) throw InputError("grid function: negative scale factor");
    std::vector<Rat> v(values_.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx) v[idx] = values_[idx] * factor;
    return GridFunction(m_, std::move(v), monotone_);
}

RectangleFamily::RectangleFamily(int k, std::vector<std::vector<Rat>> rects)
    : k_(k), rects_(std::move(rects)) {
    if (k_ < 1) throw InputError("rectangle family: dimension must be positive");
    for (std::size_t r = 0; r < rects_.size(); ++r) {
        if (rects_[r].size() != static_cast<std::size_t>(k_)) {
            std::ostringstream os;
            os << "rectangle family: rect " << r + 1 << " has " << rects_[r].size()
               << " coordinates, expected " << k_;
            throw InputError(os.str());
        }
        for (int j = 0; j < k_; ++j) {
            const Rat& c = rects_[r][static_cast<std::size_t>(j)];
            if (c < 0 || c > 1) {
                std::ostringstream os;
                os << "rectangle family: coordinate " << j + 1 << " of rect " << r + 1
                   << " outside [0,1]";
                throw InputError(os.str());
            }
        }
    }
}

const std::vector<Rat>& RectangleFamily::rect(int i) const {
    if (i < 1 || i > size())
        throw InputError("rectangle family: index " + std::to_string(i) + " out of range");
    return rects_[static_cast<std::size_t>(i - 1)];
}

Rat rect_product_expect(const RectangleFamily& fam, std::span<const int> indices) {
    if (indices.empty()) throw InputError("rect_product_expect: empty index set");
    Rat volume(1);
    for (int j = 0; j < fam.k(); ++j) {
        const Rat* axis_min = nullptr;
        for (int idx : indices) {
            const Rat& c = fam.rect(idx)[static_cast<std::size_t>(j)];
            if (axis_min == nullptr || c < *axis_min) axis_min = &c;
        }
        volume *= *axis_min;
    }
    return volume;
}

} // namespace fkg
