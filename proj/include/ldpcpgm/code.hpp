#ifndef LDPCPGM_CODE_HPP
#define LDPCPGM_CODE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldpcpgm/factor.hpp"

namespace ldpcpgm {

/// Sparse M x N binary parity check matrix; each row stores the sorted
/// column indices of its ones.
struct ParityCheckMatrix {
  int n_cols = 0;
  std::vector<std::vector<VariableId>> rows;

  int n_rows() const { return static_cast<int>(rows.size()); }
};

struct CodeParameters {
  int k = 0;
  int n = 0;

  double rate() const { return static_cast<double>(k) / n; }
};

/// Protograph exponent matrix: -1 marks an empty block, e in 0..Z-1 a Z x Z
/// identity cyclically right-shifted by e.
struct BaseGraph {
  int rows = 0;
  int cols = 0;
  int lifting = 1;                          // Z
  std::vector<std::vector<int>> exponents;  // reduced modulo Z on load
};

/// Parses the alist sparse-matrix interchange format (1-based indices, zero
/// padding permitted). Errors carry the offending line number.
ParityCheckMatrix parse_alist(std::string_view text);
std::string write_alist(const ParityCheckMatrix& h);
ParityCheckMatrix load_alist_file(const std::string& path);

/// Parses the base-graph fixture format: header "rows cols Z" followed by
/// `rows` lines of space-separated exponents with -1 for empty blocks.
BaseGraph parse_base_graph(std::string_view text);
BaseGraph load_base_graph_file(const std::string& path);

/// Lifts the base graph into a (rows*Z) x (cols*Z) binary matrix.
ParityCheckMatrix expand_base_graph(const BaseGraph& bg);

/// Takes the top-left (N-K) x N sub-matrix of a full parity check matrix and
/// validates it (no empty rows, full row rank over GF(2)). This fixed
/// sub-matrix policy is how the shortened study code is produced.
ParityCheckMatrix derive_rate_half_subcode(const ParityCheckMatrix& h_full, int k, int n);

/// Systematic GF(2) encoder. Gauss-Jordan elimination is run once at
/// construction, choosing pivot columns from the right so message bits land
/// on the leading columns whenever the trailing columns can absorb the
/// checks. Throws on rank-deficient matrices.
class SystematicEncoder {
 public:
  explicit SystematicEncoder(const ParityCheckMatrix& h);

  /// Encodes k message bits into an n-bit codeword with H c^T = 0.
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> message) const;

  int k() const { return static_cast<int>(message_positions_.size()); }
  int n() const { return n_; }
  CodeParameters parameters() const { return {k(), n()}; }

  /// Codeword positions carrying message bits, ascending.
  const std::vector<int>& message_positions() const { return message_positions_; }

 private:
  int n_ = 0;
  std::vector<int> message_positions_;
  // One entry per check: the pivot column and, per message bit, whether it
  // participates in that check after elimination.
  std::vector<int> pivot_cols_;
  std::vector<std::vector<int>> pivot_deps_;  // indices into message_positions_
};

/// Per-row XOR of the selected bits; all-zero iff `bits` is a valid codeword.
std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h, std::span<const std::uint8_t> bits);

/// One parity check factor per row of H, in row order.
std::vector<DiscreteFactor> parity_factors_from_h(const ParityCheckMatrix& h);

}  // namespace ldpcpgm

#endif  // LDPCPGM_CODE_HPP
