#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ldpcpgm/code.hpp"

using namespace ldpcpgm;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(LDPCPGM_FIXTURES) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::uint8_t> random_bits(int n, std::mt19937_64& gen) {
  std::vector<std::uint8_t> bits(n);
  for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(gen() & 1);
  return bits;
}

}  // namespace

TEST_CASE("hamming alist fixture parses to the canonical checks") {
  const auto h = load_alist_file(fixture_path("hamming_7_4.alist"));
  CHECK(h.n_cols == 7);
  CHECK(h.n_rows() == 3);
  CHECK(h.rows[0] == std::vector<VariableId>{0, 1, 2, 4});
  CHECK(h.rows[1] == std::vector<VariableId>{0, 1, 3, 5});
  CHECK(h.rows[2] == std::vector<VariableId>{0, 2, 3, 6});
}

TEST_CASE("alist parsing") {
  SUBCASE("minimal matrix") {
    const auto h = parse_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 2\n");
    CHECK(h.n_cols == 2);
    CHECK(h.rows == std::vector<std::vector<VariableId>>{{0, 1}});
  }
  SUBCASE("zero padding is accepted") {
    const auto h = parse_alist("3 1\n1 3\n1 1 1\n3\n1 0\n1 0\n1 0\n1 2 3\n");
    CHECK(h.rows[0] == std::vector<VariableId>{0, 1, 2});
  }
  SUBCASE("out-of-range column index reports the line") {
    const std::string text = "7 1\n1 7\n1 1 1 1 1 1 1\n7\n1\n1\n1\n1\n1\n1\n1\n1 2 3 4 5 6 9\n";
    CHECK_THROWS_WITH_AS(parse_alist(text), doctest::Contains("line 12"), std::runtime_error);
  }
  SUBCASE("degree mismatch is rejected") {
    CHECK_THROWS(parse_alist("2 1\n1 2\n1 1\n2\n1\n1\n1\n"));
  }
  SUBCASE("adjacency mismatch is rejected") {
    // Column list says bit 0 is in check 1, row list omits it.
    CHECK_THROWS(parse_alist("2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n"));
  }
  SUBCASE("empty rows are rejected") {
    CHECK_THROWS(parse_alist("1 1\n1 0\n0\n0\n\n\n"));
  }
}

TEST_CASE("alist round trip on the fixtures") {
  for (const char* name : {"hamming_7_4.alist", "nr_bg2_z2_k20_n40.alist"}) {
    const auto h = load_alist_file(fixture_path(name));
    const auto again = parse_alist(write_alist(h));
    CHECK(again.n_cols == h.n_cols);
    CHECK(again.rows == h.rows);
    CHECK(write_alist(again) == write_alist(h));
  }
}

TEST_CASE("base graph expansion") {
  SUBCASE("exponent -1 becomes a zero block") {
    const auto h = expand_base_graph(parse_base_graph("1 2 2\n-1 0\n"));
    CHECK(h.rows[0] == std::vector<VariableId>{2});
    CHECK(h.rows[1] == std::vector<VariableId>{3});
  }
  SUBCASE("exponent 0 becomes the identity") {
    const auto h = expand_base_graph(parse_base_graph("1 1 2\n0\n"));
    CHECK(h.rows[0] == std::vector<VariableId>{0});
    CHECK(h.rows[1] == std::vector<VariableId>{1});
  }
  SUBCASE("exponent 1 becomes the anti-diagonal") {
    const auto h = expand_base_graph(parse_base_graph("1 1 2\n1\n"));
    CHECK(h.rows[0] == std::vector<VariableId>{1});
    CHECK(h.rows[1] == std::vector<VariableId>{0});
  }
  SUBCASE("circulant blocks have unit row and column sums") {
    const auto bg = load_base_graph_file(fixture_path("nr_bg2_set0.txt"));
    const auto h = expand_base_graph(bg);
    CHECK(h.n_cols == bg.cols * bg.lifting);
    CHECK(h.n_rows() == bg.rows * bg.lifting);
    for (int br = 0; br < bg.rows; ++br) {
      for (int bc = 0; bc < bg.cols; ++bc) {
        int count = 0;
        for (int i = 0; i < bg.lifting; ++i) {
          for (VariableId c : h.rows[br * bg.lifting + i]) {
            if (static_cast<int>(c) / bg.lifting == bc) ++count;
          }
        }
        CHECK(count == (bg.exponents[br][bc] < 0 ? 0 : bg.lifting));
      }
    }
  }
}

TEST_CASE("rate-half subcode derivation") {
  const auto bg = load_base_graph_file(fixture_path("nr_bg2_set0.txt"));
  const auto full = expand_base_graph(bg);
  const auto h = derive_rate_half_subcode(full, 20, 40);
  CHECK(h.n_cols == 40);
  CHECK(h.n_rows() == 20);

  SUBCASE("largest checks have cardinality 10 and 8") {
    std::multiset<std::size_t> degrees;
    for (const auto& row : h.rows) degrees.insert(row.size());
    CHECK(*degrees.rbegin() == 10);
    CHECK(degrees.count(10) == 4);
    CHECK(degrees.count(8) == 4);
  }
  SUBCASE("identity when the full matrix is requested") {
    const auto same = derive_rate_half_subcode(h, 20, 40);
    CHECK(same.rows == h.rows);
  }
  SUBCASE("an all-zero row is rejected") {
    ParityCheckMatrix bad = h;
    bad.rows[5] = {39};  // only a column that gets cut
    CHECK_THROWS(derive_rate_half_subcode(bad, 21, 39));
  }
  SUBCASE("the frozen alist fixture matches regeneration") {
    CHECK(write_alist(h) ==
          slurp(fixture_path("nr_bg2_z2_k20_n40.alist")));
  }
}

TEST_CASE("systematic encoder on the canonical Hamming checks") {
  const auto h = load_alist_file(fixture_path("hamming_7_4.alist"));
  const SystematicEncoder enc(h);
  CHECK(enc.k() == 4);
  CHECK(enc.n() == 7);
  CHECK(enc.message_positions() == std::vector<int>{0, 1, 2, 3});

  SUBCASE("all-zero message maps to the all-zero codeword") {
    CHECK(enc.encode(std::vector<std::uint8_t>{0, 0, 0, 0}) ==
          std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 0});
  }
  SUBCASE("worked example") {
    // b4 = b0^b1^b2, b5 = b0^b1^b3, b6 = b0^b2^b3
    CHECK(enc.encode(std::vector<std::uint8_t>{1, 0, 1, 1}) ==
          std::vector<std::uint8_t>{1, 0, 1, 1, 0, 0, 1});
  }
  SUBCASE("wrong message length") {
    CHECK_THROWS(enc.encode(std::vector<std::uint8_t>{1, 0}));
  }
}

TEST_CASE("encoder output always has zero syndrome") {
  std::mt19937_64 gen(13);
  for (const char* name : {"hamming_7_4.alist", "nr_bg2_z2_k20_n40.alist"}) {
    const auto h = load_alist_file(fixture_path(name));
    const SystematicEncoder enc(h);
    for (int i = 0; i < 200; ++i) {
      const auto c = enc.encode(random_bits(enc.k(), gen));
      for (std::uint8_t s : syndrome(h, c)) CHECK(s == 0);
    }
  }
}

TEST_CASE("rank-deficient matrices are rejected") {
  ParityCheckMatrix h;
  h.n_cols = 3;
  h.rows = {{0, 1}, {1, 2}, {0, 2}};  // rows sum to zero
  CHECK_THROWS(SystematicEncoder{h});
}

TEST_CASE("syndrome") {
  const auto h = load_alist_file(fixture_path("hamming_7_4.alist"));
  SUBCASE("valid codeword gives all zeros") {
    const SystematicEncoder enc(h);
    const auto c = enc.encode(std::vector<std::uint8_t>{1, 1, 0, 1});
    CHECK(syndrome(h, c) == std::vector<std::uint8_t>{0, 0, 0});
  }
  SUBCASE("a single flip reproduces that bit's column") {
    const SystematicEncoder enc(h);
    auto c = enc.encode(std::vector<std::uint8_t>{1, 1, 0, 1});
    c[3] ^= 1;
    CHECK(syndrome(h, c) == std::vector<std::uint8_t>{0, 1, 1});  // column b3
  }
  SUBCASE("all ones satisfies the even 4-bit checks") {
    const std::vector<std::uint8_t> ones(7, 1);
    CHECK(syndrome(h, ones) == std::vector<std::uint8_t>{0, 0, 0});
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS(syndrome(h, std::vector<std::uint8_t>{1, 0}));
  }
}

TEST_CASE("parity factors from H") {
  const auto h = load_alist_file(fixture_path("hamming_7_4.alist"));
  const auto factors = parity_factors_from_h(h);
  REQUIRE(factors.size() == 3);
  CHECK(factors[0].scope() == std::vector<VariableId>{0, 1, 2, 4});
  CHECK(factors[1].scope() == std::vector<VariableId>{0, 1, 3, 5});
  CHECK(factors[2].scope() == std::vector<VariableId>{0, 2, 3, 6});
  CHECK(factors[0] == make_parity_factor({0, 1, 2, 4}));

  const auto h40 = load_alist_file(fixture_path("nr_bg2_z2_k20_n40.alist"));
  const auto f40 = parity_factors_from_h(h40);
  CHECK(f40.size() == 20);
  std::size_t biggest = 0, second = 0;
  for (const auto& f : f40) {
    if (f.scope().size() >= biggest) {
      second = biggest;
      biggest = f.scope().size();
    } else if (f.scope().size() > second) {
      second = f.scope().size();
    }
  }
  CHECK(biggest == 10);
  CHECK(second == 10);
}

TEST_CASE("hamming minimum distance is three") {
  const auto h = load_alist_file(fixture_path("hamming_7_4.alist"));
  const SystematicEncoder enc(h);
  std::vector<std::vector<std::uint8_t>> words;
  for (int m = 0; m < 16; ++m) {
    words.push_back(enc.encode(std::vector<std::uint8_t>{
        static_cast<std::uint8_t>(m & 1), static_cast<std::uint8_t>((m >> 1) & 1),
        static_cast<std::uint8_t>((m >> 2) & 1), static_cast<std::uint8_t>((m >> 3) & 1)}));
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      int dist = 0;
      for (int b = 0; b < 7; ++b) dist += words[i][b] != words[j][b];
      CHECK(dist >= 3);
    }
  }
}
