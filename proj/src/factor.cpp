#include "ldpcpgm/factor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ldpcpgm {

namespace {

// Tables are dense-enumerable (2^|scope| keys); keep that tractable.
constexpr std::size_t kMaxScope = 22;

void check_scope_size(std::size_t n) {
  if (n > kMaxScope) {
    throw std::invalid_argument("factor scope too large: " + std::to_string(n) + " variables");
  }
}

// Bit positions of `sub` inside `super`; both ascending, sub must be contained.
std::vector<int> positions_in(const std::vector<VariableId>& sub,
                              const std::vector<VariableId>& super,
                              const char* what) {
  std::vector<int> pos(sub.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    while (j < super.size() && super[j] < sub[i]) ++j;
    if (j == super.size() || super[j] != sub[i]) {
      throw std::invalid_argument(std::string(what) + ": variable " + std::to_string(sub[i]) +
                                  " not in scope");
    }
    pos[i] = static_cast<int>(j);
  }
  return pos;
}

inline std::uint32_t gather_bits(std::uint32_t key, const std::vector<int>& positions) {
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out |= ((key >> positions[i]) & 1u) << i;
  }
  return out;
}

inline std::uint32_t scatter_bits(std::uint32_t key, const std::vector<int>& positions) {
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out |= ((key >> i) & 1u) << positions[i];
  }
  return out;
}

}  // namespace

DiscreteFactor::DiscreteFactor(std::vector<VariableId> scope, std::vector<Entry> entries) {
  check_scope_size(scope.size());

  // Canonical order is ascending VariableId; remap entry keys accordingly.
  std::vector<std::size_t> order(scope.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scope[a] < scope[b]; });

  scope_.resize(scope.size());
  for (std::size_t i = 0; i < order.size(); ++i) scope_[i] = scope[order[i]];
  for (std::size_t i = 1; i < scope_.size(); ++i) {
    if (scope_[i] == scope_[i - 1]) {
      throw std::invalid_argument("duplicate variable " + std::to_string(scope_[i]) + " in scope");
    }
  }

  entries_.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!(e.value > 0.0) || !std::isfinite(e.value)) {
      throw std::invalid_argument("factor entries must be strictly positive and finite");
    }
    if (scope.size() < 32 && (e.key >> scope.size()) != 0) {
      throw std::invalid_argument("entry key out of range for scope");
    }
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      k |= ((e.key >> order[i]) & 1u) << i;
    }
    entries_.push_back({k, e.value});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].key == entries_[i - 1].key) {
      throw std::invalid_argument("duplicate assignment in factor table");
    }
  }
}

DiscreteFactor DiscreteFactor::uniform_ones(std::vector<VariableId> scope) {
  check_scope_size(scope.size());
  DiscreteFactor f;
  f.scope_ = std::move(scope);
  std::sort(f.scope_.begin(), f.scope_.end());
  for (std::size_t i = 1; i < f.scope_.size(); ++i) {
    if (f.scope_[i] == f.scope_[i - 1]) {
      throw std::invalid_argument("duplicate variable in scope");
    }
  }
  const std::uint32_t n = 1u << f.scope_.size();
  f.entries_.resize(n);
  for (std::uint32_t k = 0; k < n; ++k) f.entries_[k] = {k, 1.0};
  return f;
}

double DiscreteFactor::at_key(std::uint32_t key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, std::uint32_t k) { return e.key < k; });
  return (it != entries_.end() && it->key == key) ? it->value : 0.0;
}

double DiscreteFactor::at(std::span<const int> assignment) const {
  if (assignment.size() != scope_.size()) {
    throw std::invalid_argument("assignment length does not match scope");
  }
  std::uint32_t key = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != 0 && assignment[i] != 1) {
      throw std::invalid_argument("assignment values must be 0 or 1");
    }
    key |= static_cast<std::uint32_t>(assignment[i]) << i;
  }
  return at_key(key);
}

double DiscreteFactor::sum() const {
  double s = 0.0;
  for (const Entry& e : entries_) s += e.value;
  return s;
}

DiscreteFactor DiscreteFactor::product(const DiscreteFactor& other, OpCounter* ops) const {
  const DiscreteFactor& f = *this;
  const DiscreteFactor& g = other;

  // Union scope.
  std::vector<VariableId> uni;
  uni.reserve(f.scope_.size() + g.scope_.size());
  std::set_union(f.scope_.begin(), f.scope_.end(), g.scope_.begin(), g.scope_.end(),
                 std::back_inserter(uni));
  check_scope_size(uni.size());

  // One multiplication per entry of the dense result table, even where the
  // outcome is zero and gets dropped.
  if (ops) ops->multiplications += std::uint64_t{1} << uni.size();

  DiscreteFactor out;
  out.scope_ = std::move(uni);

  if (g.scope_.size() <= f.scope_.size() &&
      std::includes(f.scope_.begin(), f.scope_.end(), g.scope_.begin(), g.scope_.end())) {
    // Nested scope: dense lookup of the smaller operand.
    const std::vector<int> gpos = positions_in(g.scope_, f.scope_, "product");
    std::vector<double> table(std::size_t{1} << g.scope_.size(), 0.0);
    for (const Entry& e : g.entries_) table[e.key] = e.value;
    out.entries_.reserve(f.entries_.size());
    for (const Entry& e : f.entries_) {
      const double gv = table[gather_bits(e.key, gpos)];
      if (gv != 0.0) {
        const double v = e.value * gv;
        if (v > 0.0) out.entries_.push_back({e.key, v});
      }
    }
    return out;
  }
  if (std::includes(g.scope_.begin(), g.scope_.end(), f.scope_.begin(), f.scope_.end())) {
    const std::vector<int> fpos = positions_in(f.scope_, g.scope_, "product");
    std::vector<double> table(std::size_t{1} << f.scope_.size(), 0.0);
    for (const Entry& e : f.entries_) table[e.key] = e.value;
    out.entries_.reserve(g.entries_.size());
    for (const Entry& e : g.entries_) {
      const double fv = table[gather_bits(e.key, fpos)];
      if (fv != 0.0) {
        const double v = fv * e.value;
        if (v > 0.0) out.entries_.push_back({e.key, v});
      }
    }
    return out;
  }

  // General case: join on the shared variables.
  std::vector<VariableId> shared;
  std::set_intersection(f.scope_.begin(), f.scope_.end(), g.scope_.begin(), g.scope_.end(),
                        std::back_inserter(shared));
  const std::vector<int> f_in_u = positions_in(f.scope_, out.scope_, "product");
  const std::vector<int> g_in_u = positions_in(g.scope_, out.scope_, "product");
  const std::vector<int> sh_in_f = positions_in(shared, f.scope_, "product");
  const std::vector<int> sh_in_g = positions_in(shared, g.scope_, "product");

  std::vector<std::vector<Entry>> buckets(std::size_t{1} << shared.size());
  for (const Entry& e : g.entries_) {
    buckets[gather_bits(e.key, sh_in_g)].push_back({scatter_bits(e.key, g_in_u), e.value});
  }
  for (const Entry& e : f.entries_) {
    const std::uint32_t fu = scatter_bits(e.key, f_in_u);
    for (const Entry& ge : buckets[gather_bits(e.key, sh_in_f)]) {
      const double v = e.value * ge.value;
      if (v > 0.0) out.entries_.push_back({fu | ge.key, v});
    }
  }
  std::sort(out.entries_.begin(), out.entries_.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  return out;
}

DiscreteFactor DiscreteFactor::divide(const DiscreteFactor& denominator, OpCounter* ops) const {
  if (!std::includes(scope_.begin(), scope_.end(), denominator.scope_.begin(),
                     denominator.scope_.end())) {
    throw std::invalid_argument("divide: denominator scope not contained in numerator scope");
  }
  // One division (counted as a multiplication) per entry of the
  // denominator's dense table per use.
  if (ops) ops->multiplications += std::uint64_t{1} << denominator.scope_.size();

  const std::vector<int> dpos = positions_in(denominator.scope_, scope_, "divide");
  std::vector<double> table(std::size_t{1} << denominator.scope_.size(), 0.0);
  for (const Entry& e : denominator.entries_) table[e.key] = e.value;

  DiscreteFactor out;
  out.scope_ = scope_;
  out.entries_.reserve(entries_.size());
  for (const Entry& e : entries_) {
    const double d = table[gather_bits(e.key, dpos)];
    if (d == 0.0) {
      // A sepset belief must never vanish where a cluster belief is positive.
      throw std::runtime_error("divide: positive entry over zero denominator (corrupted belief)");
    }
    const double v = e.value / d;
    if (v > 0.0 && std::isfinite(v)) out.entries_.push_back({e.key, v});
  }
  return out;
}

DiscreteFactor DiscreteFactor::marginalize(std::span<const VariableId> keep, OpCounter* ops) const {
  std::vector<VariableId> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());

  const std::vector<int> kpos = positions_in(k, scope_, "marginalize");

  if (k.size() == scope_.size()) {
    // keep == scope: nothing summed out, no additions charged.
    return *this;
  }
  if (ops) {
    ops->additions += (std::uint64_t{1} << scope_.size()) - (std::uint64_t{1} << k.size());
  }

  std::vector<double> acc(std::size_t{1} << k.size(), 0.0);
  for (const Entry& e : entries_) acc[gather_bits(e.key, kpos)] += e.value;

  DiscreteFactor out;
  out.scope_ = std::move(k);
  for (std::uint32_t key = 0; key < acc.size(); ++key) {
    if (acc[key] > 0.0) out.entries_.push_back({key, acc[key]});
  }
  return out;
}

DiscreteFactor DiscreteFactor::marginalize(const std::vector<VariableId>& keep,
                                           OpCounter* ops) const {
  return marginalize(std::span<const VariableId>(keep), ops);
}

DiscreteFactor DiscreteFactor::normalized() const {
  if (entries_.empty()) {
    throw std::runtime_error("normalize: empty factor (all-zero belief)");
  }
  const double s = sum();
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::runtime_error("normalize: non-finite factor mass");
  }
  DiscreteFactor out;
  out.scope_ = scope_;
  out.entries_.reserve(entries_.size());
  const double inv = 1.0 / s;
  for (const Entry& e : entries_) {
    const double v = e.value * inv;
    if (v > 0.0) out.entries_.push_back({e.key, v});
  }
  return out;
}

bool DiscreteFactor::approx_equal(const DiscreteFactor& other, double tol) const {
  if (scope_ != other.scope_) return false;
  const std::uint32_t n = 1u << scope_.size();
  for (std::uint32_t k = 0; k < n; ++k) {
    if (std::abs(at_key(k) - other.at_key(k)) > tol) return false;
  }
  return true;
}

DiscreteFactor make_parity_factor(std::vector<VariableId> scope) {
  if (scope.empty()) {
    throw std::invalid_argument("parity factor needs a non-empty scope");
  }
  check_scope_size(scope.size());
  DiscreteFactor f;
  f.scope_ = std::move(scope);
  std::sort(f.scope_.begin(), f.scope_.end());
  for (std::size_t i = 1; i < f.scope_.size(); ++i) {
    if (f.scope_[i] == f.scope_[i - 1]) {
      throw std::invalid_argument("duplicate variable in parity factor scope");
    }
  }
  const std::uint32_t n = 1u << f.scope_.size();
  f.entries_.reserve(n / 2);
  for (std::uint32_t k = 0; k < n; ++k) {
    if ((std::popcount(k) & 1) == 0) f.entries_.push_back({k, 1.0});
  }
  return f;
}

double kl_divergence(const DiscreteFactor& p, const DiscreteFactor& q) {
  if (p.scope() != q.scope()) {
    throw std::invalid_argument("kl_divergence: scope mismatch");
  }
  constexpr double kEps = 1e-12;
  double d = 0.0;
  for (const DiscreteFactor::Entry& e : p.entries()) {
    const double qv = std::max(q.at_key(e.key), kEps);
    d += e.value * std::log(e.value / qv);
  }
  return d;
}

}  // namespace ldpcpgm
