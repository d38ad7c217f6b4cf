#ifndef LDPCPGM_FACTOR_HPP
#define LDPCPGM_FACTOR_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace ldpcpgm {

/// Index of one codeword bit. Bits of a code form the dense range 0..N-1.
using VariableId = std::uint32_t;

/// Operation tally for one decode session. Divisions count as
/// multiplications. Costs are charged per dense table size of the scopes
/// involved, so two sweeps over the same schedule always charge the same
/// amounts regardless of how sparse the beliefs have become.
struct OpCounter {
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;

  void reset() {
    additions = 0;
    multiplications = 0;
  }
};

/// Sparse non-negative table over a set of binary variables.
///
/// The scope is kept sorted by ascending VariableId and every stored entry
/// is strictly positive: an absent assignment means weight exactly zero.
/// Assignments are packed into a key whose bit i carries the value of
/// scope()[i]. Instances are immutable after construction; all operations
/// return new factors.
class DiscreteFactor {
 public:
  /// States per variable. Everything here is a codeword bit; the key packing
  /// assumes exactly this many states.
  static constexpr int kCardinality = 2;

  struct Entry {
    std::uint32_t key;
    double value;

    bool operator==(const Entry&) const = default;
  };

  DiscreteFactor() = default;

  /// Builds a factor from a scope given in any order and entries keyed in
  /// that given order. The table is canonicalized (scope sorted, keys
  /// remapped). Throws on duplicate variables, duplicate assignments, or
  /// non-positive/non-finite values.
  DiscreteFactor(std::vector<VariableId> scope, std::vector<Entry> entries);

  /// Factor with value 1 for every assignment of the scope (multiplicative
  /// identity on that scope).
  static DiscreteFactor uniform_ones(std::vector<VariableId> scope);

  const std::vector<VariableId>& scope() const { return scope_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t entry_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Value at a key over the canonical (sorted) scope; 0 if absent.
  double at_key(std::uint32_t key) const;

  /// Value at an assignment aligned with scope() order; 0 if absent.
  double at(std::span<const int> assignment) const;

  double sum() const;

  DiscreteFactor product(const DiscreteFactor& other, OpCounter* ops = nullptr) const;

  /// Entrywise division with the 0/0 = 0 convention. The denominator scope
  /// must be contained in this factor's scope. A positive entry over a zero
  /// denominator signals a corrupted belief state and throws.
  DiscreteFactor divide(const DiscreteFactor& denominator, OpCounter* ops = nullptr) const;

  /// Sums out every variable not in `keep` (keep must be a subset of the
  /// scope). No additions are charged when keep equals the whole scope.
  DiscreteFactor marginalize(std::span<const VariableId> keep, OpCounter* ops = nullptr) const;
  DiscreteFactor marginalize(const std::vector<VariableId>& keep, OpCounter* ops = nullptr) const;

  /// Entries scaled to sum to one. Throws on an empty factor (an all-zero
  /// belief signals contradictory evidence).
  DiscreteFactor normalized() const;

  /// Exact table equality; insensitive to the scope order the operands were
  /// constructed with, since both are canonicalized.
  bool operator==(const DiscreteFactor& other) const = default;

  bool approx_equal(const DiscreteFactor& other, double tol) const;

 private:
  std::vector<VariableId> scope_;  // ascending
  std::vector<Entry> entries_;     // ascending key, strictly positive values

  friend DiscreteFactor make_parity_factor(std::vector<VariableId> scope);
};

/// Parity check factor: value 1 for every assignment of the scope with an
/// even number of ones, nothing stored elsewhere. Stores exactly
/// 2^(|scope|-1) entries.
DiscreteFactor make_parity_factor(std::vector<VariableId> scope);

/// D_KL(p || q) in nats over identical scope sets, with q clamped below by
/// 1e-12 wherever p is positive. Terms with p=0 contribute zero. Both
/// factors are expected to be normalized.
double kl_divergence(const DiscreteFactor& p, const DiscreteFactor& q);

}  // namespace ldpcpgm

#endif  // LDPCPGM_FACTOR_HPP
