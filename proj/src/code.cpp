#include "ldpcpgm/code.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ldpcpgm {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw std::runtime_error("alist parse error, line " + std::to_string(line) + ": " + msg);
}

struct LineReader {
  std::vector<std::string> lines;
  std::size_t next = 0;

  explicit LineReader(std::string_view text) {
    std::string cur;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }

  // Returns the next non-blank line and its 1-based number.
  std::pair<std::string, int> take(const char* what) {
    while (next < lines.size()) {
      const std::string& l = lines[next++];
      if (l.find_first_not_of(" \t") != std::string::npos) {
        return {l, static_cast<int>(next)};
      }
    }
    parse_fail(static_cast<int>(lines.size()), std::string("missing ") + what);
  }
};

std::vector<long> parse_ints(const std::string& line, int line_no) {
  std::istringstream is(line);
  std::vector<long> out;
  long v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) parse_fail(line_no, "non-numeric token");
  return out;
}

// Gauss-Jordan over GF(2) on a dense copy of H; returns the rank and
// optionally the pivot columns. Pivot candidates are scanned right to left
// so message bits land on the leading columns whenever possible.
int gauss_jordan(std::vector<std::vector<std::uint8_t>>& m, int n_cols,
                 std::vector<int>* pivot_cols) {
  const int n_rows = static_cast<int>(m.size());
  int rank = 0;
  for (int col = n_cols - 1; col >= 0 && rank < n_rows; --col) {
    int pivot = -1;
    for (int r = rank; r < n_rows; ++r) {
      if (m[r][col]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < n_rows; ++r) {
      if (r != rank && m[r][col]) {
        for (int c = 0; c < n_cols; ++c) m[r][c] ^= m[rank][c];
      }
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++rank;
  }
  return rank;
}

std::vector<std::vector<std::uint8_t>> to_dense(const ParityCheckMatrix& h) {
  std::vector<std::vector<std::uint8_t>> m(h.rows.size(),
                                           std::vector<std::uint8_t>(h.n_cols, 0));
  for (std::size_t r = 0; r < h.rows.size(); ++r) {
    for (VariableId c : h.rows[r]) m[r][c] = 1;
  }
  return m;
}

}  // namespace

ParityCheckMatrix parse_alist(std::string_view text) {
  LineReader rd(text);

  auto [l1, n1] = rd.take("matrix dimensions");
  const auto dims = parse_ints(l1, n1);
  if (dims.size() != 2 || dims[0] <= 0 || dims[1] <= 0) {
    parse_fail(n1, "expected 'N M' with positive dimensions");
  }
  const int n = static_cast<int>(dims[0]);
  const int m = static_cast<int>(dims[1]);

  auto [l2, n2] = rd.take("maximum degrees");
  const auto maxdeg = parse_ints(l2, n2);
  if (maxdeg.size() != 2 || maxdeg[0] < 0 || maxdeg[1] < 0) {
    parse_fail(n2, "expected 'max_col_degree max_row_degree'");
  }

  auto [l3, n3] = rd.take("column degree list");
  const auto col_deg = parse_ints(l3, n3);
  if (static_cast<int>(col_deg.size()) != n) {
    parse_fail(n3, "expected " + std::to_string(n) + " column degrees");
  }
  auto [l4, n4] = rd.take("row degree list");
  const auto row_deg = parse_ints(l4, n4);
  if (static_cast<int>(row_deg.size()) != m) {
    parse_fail(n4, "expected " + std::to_string(m) + " row degrees");
  }
  for (int c = 0; c < n; ++c) {
    if (col_deg[c] < 0 || col_deg[c] > maxdeg[0]) parse_fail(n3, "column degree out of range");
  }
  for (int r = 0; r < m; ++r) {
    if (row_deg[r] <= 0 || row_deg[r] > maxdeg[1]) {
      parse_fail(n4, "row degree out of range (empty rows are not allowed)");
    }
  }

  std::vector<std::set<int>> by_col(n);
  for (int c = 0; c < n; ++c) {
    auto [line, line_no] = rd.take("column adjacency line");
    for (long v : parse_ints(line, line_no)) {
      if (v == 0) continue;  // zero padding
      if (v < 1 || v > m) parse_fail(line_no, "row index " + std::to_string(v) + " out of range");
      if (!by_col[c].insert(static_cast<int>(v - 1)).second) {
        parse_fail(line_no, "duplicate row index in column " + std::to_string(c + 1));
      }
    }
    if (static_cast<long>(by_col[c].size()) != col_deg[c]) {
      parse_fail(line_no, "column " + std::to_string(c + 1) + " has " +
                              std::to_string(by_col[c].size()) + " entries, declared " +
                              std::to_string(col_deg[c]));
    }
  }

  ParityCheckMatrix h;
  h.n_cols = n;
  h.rows.resize(m);
  for (int r = 0; r < m; ++r) {
    auto [line, line_no] = rd.take("row adjacency line");
    std::set<VariableId> cols;
    for (long v : parse_ints(line, line_no)) {
      if (v == 0) continue;
      if (v < 1 || v > n) {
        parse_fail(line_no, "column index " + std::to_string(v) + " out of range");
      }
      if (!cols.insert(static_cast<VariableId>(v - 1)).second) {
        parse_fail(line_no, "duplicate column index in row " + std::to_string(r + 1));
      }
    }
    if (static_cast<long>(cols.size()) != row_deg[r]) {
      parse_fail(line_no, "row " + std::to_string(r + 1) + " has " + std::to_string(cols.size()) +
                              " entries, declared " + std::to_string(row_deg[r]));
    }
    for (VariableId c : cols) {
      if (!by_col[c].count(r)) {
        parse_fail(line_no, "row/column adjacency mismatch at row " + std::to_string(r + 1) +
                                ", column " + std::to_string(c + 1));
      }
    }
    h.rows[r].assign(cols.begin(), cols.end());
  }
  // Column lists may not mention rows the row lists omitted.
  for (int c = 0; c < n; ++c) {
    for (int r : by_col[c]) {
      if (!std::binary_search(h.rows[r].begin(), h.rows[r].end(),
                              static_cast<VariableId>(c))) {
        parse_fail(0, "row/column adjacency mismatch at column " + std::to_string(c + 1));
      }
    }
  }
  return h;
}

std::string write_alist(const ParityCheckMatrix& h) {
  const int n = h.n_cols;
  const int m = h.n_rows();
  std::vector<std::vector<int>> by_col(n);
  for (int r = 0; r < m; ++r) {
    for (VariableId c : h.rows[r]) by_col[c].push_back(r);
  }
  std::size_t max_col = 0, max_row = 0;
  for (const auto& c : by_col) max_col = std::max(max_col, c.size());
  for (const auto& r : h.rows) max_row = std::max(max_row, r.size());

  std::ostringstream os;
  os << n << ' ' << m << '\n';
  os << max_col << ' ' << max_row << '\n';
  for (int c = 0; c < n; ++c) os << by_col[c].size() << (c + 1 < n ? ' ' : '\n');
  for (int r = 0; r < m; ++r) os << h.rows[r].size() << (r + 1 < m ? ' ' : '\n');
  for (int c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < by_col[c].size(); ++i) {
      os << by_col[c][i] + 1 << (i + 1 < by_col[c].size() ? ' ' : '\n');
    }
    if (by_col[c].empty()) os << '\n';
  }
  for (int r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < h.rows[r].size(); ++i) {
      os << h.rows[r][i] + 1 << (i + 1 < h.rows[r].size() ? ' ' : '\n');
    }
  }
  return os.str();
}

ParityCheckMatrix load_alist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alist file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_alist(buf.str());
}

BaseGraph parse_base_graph(std::string_view text) {
  // Lines starting with '#' carry provenance notes; drop them.
  std::string stripped;
  stripped.reserve(text.size());
  std::istringstream raw{std::string(text)};
  std::string line;
  while (std::getline(raw, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    stripped += line;
    stripped += '\n';
  }
  std::istringstream is{stripped};
  BaseGraph bg;
  if (!(is >> bg.rows >> bg.cols >> bg.lifting) || bg.rows <= 0 || bg.cols <= 0 ||
      bg.lifting < 1) {
    throw std::runtime_error("base graph: bad header, expected 'rows cols Z'");
  }
  bg.exponents.assign(bg.rows, std::vector<int>(bg.cols, -1));
  for (int r = 0; r < bg.rows; ++r) {
    for (int c = 0; c < bg.cols; ++c) {
      long e;
      if (!(is >> e)) {
        throw std::runtime_error("base graph: missing exponent at row " + std::to_string(r) +
                                 ", col " + std::to_string(c));
      }
      bg.exponents[r][c] = e < 0 ? -1 : static_cast<int>(e % bg.lifting);
    }
  }
  return bg;
}

BaseGraph load_base_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open base graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_base_graph(buf.str());
}

ParityCheckMatrix expand_base_graph(const BaseGraph& bg) {
  const int z = bg.lifting;
  ParityCheckMatrix h;
  h.n_cols = bg.cols * z;
  h.rows.assign(static_cast<std::size_t>(bg.rows) * z, {});
  for (int r = 0; r < bg.rows; ++r) {
    for (int c = 0; c < bg.cols; ++c) {
      const int e = bg.exponents[r][c];
      if (e < 0) continue;
      for (int i = 0; i < z; ++i) {
        h.rows[static_cast<std::size_t>(r) * z + i].push_back(
            static_cast<VariableId>(c * z + (i + e) % z));
      }
    }
  }
  for (auto& row : h.rows) std::sort(row.begin(), row.end());
  return h;
}

ParityCheckMatrix derive_rate_half_subcode(const ParityCheckMatrix& h_full, int k, int n) {
  const int m = n - k;
  if (k <= 0 || m <= 0 || n > h_full.n_cols || m > h_full.n_rows()) {
    throw std::invalid_argument("derive_rate_half_subcode: sub-matrix does not fit");
  }
  ParityCheckMatrix h;
  h.n_cols = n;
  h.rows.resize(m);
  for (int r = 0; r < m; ++r) {
    for (VariableId c : h_full.rows[r]) {
      if (static_cast<int>(c) < n) h.rows[r].push_back(c);
    }
    if (h.rows[r].empty()) {
      throw std::runtime_error("derive_rate_half_subcode: row " + std::to_string(r) +
                               " is empty in the sub-matrix");
    }
  }
  auto dense = to_dense(h);
  const int rank = gauss_jordan(dense, n, nullptr);
  if (rank != m) {
    throw std::runtime_error("derive_rate_half_subcode: sub-matrix rank " +
                             std::to_string(rank) + " < " + std::to_string(m));
  }
  return h;
}

SystematicEncoder::SystematicEncoder(const ParityCheckMatrix& h) : n_(h.n_cols) {
  for (int r = 0; r < h.n_rows(); ++r) {
    if (h.rows[r].empty()) {
      throw std::invalid_argument("encoder: row " + std::to_string(r) + " of H is empty");
    }
    for (VariableId c : h.rows[r]) {
      if (static_cast<int>(c) >= n_) throw std::invalid_argument("encoder: column out of range");
    }
  }

  auto dense = to_dense(h);
  const int m = h.n_rows();
  const int rank = gauss_jordan(dense, n_, &pivot_cols_);
  if (rank != m) {
    throw std::runtime_error("encoder: H is rank deficient (rank " + std::to_string(rank) +
                             " of " + std::to_string(m) + ")");
  }

  std::vector<bool> is_pivot(n_, false);
  for (int c : pivot_cols_) is_pivot[c] = true;
  for (int c = 0; c < n_; ++c) {
    if (!is_pivot[c]) message_positions_.push_back(c);
  }

  // After Gauss-Jordan each row touches its pivot column plus message
  // columns only; record those dependencies for encoding.
  pivot_deps_.resize(m);
  for (int r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < message_positions_.size(); ++i) {
      if (dense[r][message_positions_[i]]) pivot_deps_[r].push_back(static_cast<int>(i));
    }
  }
}

std::vector<std::uint8_t> SystematicEncoder::encode(std::span<const std::uint8_t> message) const {
  if (static_cast<int>(message.size()) != k()) {
    throw std::invalid_argument("encode: expected " + std::to_string(k()) + " message bits, got " +
                                std::to_string(message.size()));
  }
  std::vector<std::uint8_t> code(n_, 0);
  for (std::size_t i = 0; i < message_positions_.size(); ++i) {
    code[message_positions_[i]] = message[i] & 1;
  }
  for (std::size_t r = 0; r < pivot_cols_.size(); ++r) {
    std::uint8_t bit = 0;
    for (int i : pivot_deps_[r]) bit ^= message[i] & 1;
    code[pivot_cols_[r]] = bit;
  }
  return code;
}

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h,
                                   std::span<const std::uint8_t> bits) {
  if (static_cast<int>(bits.size()) != h.n_cols) {
    throw std::invalid_argument("syndrome: expected " + std::to_string(h.n_cols) + " bits, got " +
                                std::to_string(bits.size()));
  }
  std::vector<std::uint8_t> s(h.rows.size(), 0);
  for (std::size_t r = 0; r < h.rows.size(); ++r) {
    std::uint8_t x = 0;
    for (VariableId c : h.rows[r]) x ^= bits[c] & 1;
    s[r] = x;
  }
  return s;
}

std::vector<DiscreteFactor> parity_factors_from_h(const ParityCheckMatrix& h) {
  std::vector<DiscreteFactor> out;
  out.reserve(h.rows.size());
  for (const auto& row : h.rows) {
    out.push_back(make_parity_factor(row));
  }
  return out;
}

}  // namespace ldpcpgm
