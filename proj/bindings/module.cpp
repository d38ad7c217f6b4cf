#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ldpcpgm/bench.hpp"

namespace py = pybind11;
using namespace ldpcpgm;

namespace {

// Factor tables cross the boundary as {assignment tuple: value} dicts keyed
// in scope() order.
py::dict entries_dict(const DiscreteFactor& f) {
  py::dict d;
  const std::size_t n = f.scope().size();
  for (const auto& e : f.entries()) {
    py::tuple key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = (e.key >> i) & 1u;
    d[key] = e.value;
  }
  return d;
}

DiscreteFactor factor_from_dict(const std::vector<VariableId>& scope, const py::dict& table) {
  std::vector<DiscreteFactor::Entry> entries;
  for (auto item : table) {
    const auto key = item.first.cast<std::vector<int>>();
    if (key.size() != scope.size()) {
      throw std::invalid_argument("assignment length does not match scope");
    }
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] != 0 && key[i] != 1) throw std::invalid_argument("assignments are binary");
      k |= static_cast<std::uint32_t>(key[i]) << i;
    }
    entries.push_back({k, item.second.cast<double>()});
  }
  return DiscreteFactor(scope, std::move(entries));
}

}  // namespace

PYBIND11_MODULE(ldpcpgm, m) {
  m.doc() = "LDPC decoding with factor-graph and cluster-graph representations";

  py::register_exception<DecodeFailure>(m, "DecodeFailure");

  py::class_<OpCounter>(m, "OpCounter")
      .def(py::init<>())
      .def_readwrite("additions", &OpCounter::additions)
      .def_readwrite("multiplications", &OpCounter::multiplications)
      .def("reset", &OpCounter::reset)
      .def("__repr__", [](const OpCounter& c) {
        std::ostringstream os;
        os << "OpCounter(additions=" << c.additions << ", multiplications=" << c.multiplications
           << ")";
        return os.str();
      });

  py::class_<DiscreteFactor>(m, "DiscreteFactor")
      .def(py::init(&factor_from_dict), py::arg("scope"), py::arg("table"))
      .def_property_readonly("scope", &DiscreteFactor::scope)
      .def_property_readonly("table", &entries_dict)
      .def("entry_count", &DiscreteFactor::entry_count)
      .def("sum", &DiscreteFactor::sum)
      .def(
          "product",
          [](const DiscreteFactor& f, const DiscreteFactor& g, OpCounter* ops) {
            return f.product(g, ops);
          },
          py::arg("other"), py::arg("ops") = nullptr)
      .def(
          "divide",
          [](const DiscreteFactor& f, const DiscreteFactor& g, OpCounter* ops) {
            return f.divide(g, ops);
          },
          py::arg("denominator"), py::arg("ops") = nullptr)
      .def(
          "marginalize",
          [](const DiscreteFactor& f, const std::vector<VariableId>& keep, OpCounter* ops) {
            return f.marginalize(keep, ops);
          },
          py::arg("keep"), py::arg("ops") = nullptr)
      .def("normalized", &DiscreteFactor::normalized)
      .def("__eq__", [](const DiscreteFactor& a, const DiscreteFactor& b) { return a == b; })
      .def("__repr__", [](const DiscreteFactor& f) {
        std::ostringstream os;
        os << "DiscreteFactor(scope=[";
        for (std::size_t i = 0; i < f.scope().size(); ++i) {
          os << (i ? ", " : "") << f.scope()[i];
        }
        os << "], entries=" << f.entry_count() << ")";
        return os.str();
      });

  m.def("make_parity_factor", &make_parity_factor, py::arg("scope"));
  m.def("uniform_ones", &DiscreteFactor::uniform_ones, py::arg("scope"));
  m.def("kl_divergence", &kl_divergence, py::arg("p"), py::arg("q"));

  py::enum_<GraphKind>(m, "GraphKind")
      .value("bethe", GraphKind::bethe)
      .value("ltrip", GraphKind::ltrip);

  py::class_<Cluster>(m, "Cluster")
      .def_readonly("id", &Cluster::id)
      .def_readonly("variables", &Cluster::variables)
      .def_readonly("initial_factor", &Cluster::initial_factor);

  py::class_<Sepset>(m, "Sepset")
      .def_readonly("a", &Sepset::a)
      .def_readonly("b", &Sepset::b)
      .def_readonly("variables", &Sepset::variables);

  py::class_<ClusterGraph>(m, "ClusterGraph")
      .def_readonly("kind", &ClusterGraph::kind)
      .def_readonly("clusters", &ClusterGraph::clusters)
      .def_readonly("sepsets", &ClusterGraph::sepsets)
      .def("dump", [](const ClusterGraph& g) { return dump_graph(g); });

  m.def("build_bethe_graph", &build_bethe_graph, py::arg("factors"), py::arg("all_vars"));
  m.def("ltrip_compile", &ltrip_compile, py::arg("factors"));
  m.def("verify_rip", &verify_rip, py::arg("graph"), py::arg("v"));

  py::class_<MessageSchedule>(m, "MessageSchedule")
      .def_readonly("layers", &MessageSchedule::layers)
      .def_property_readonly("forward",
                             [](const MessageSchedule& s) {
                               std::vector<std::tuple<int, int, int>> out;
                               for (const auto& e : s.forward) {
                                 out.emplace_back(e.source, e.target, e.sepset);
                               }
                               return out;
                             })
      .def_property_readonly("backward", [](const MessageSchedule& s) {
        std::vector<std::tuple<int, int, int>> out;
        for (const auto& e : s.backward) out.emplace_back(e.source, e.target, e.sepset);
        return out;
      });

  m.def("build_layered_schedule", &build_layered_schedule, py::arg("graph"), py::arg("seeds"));
  m.def("largest_cluster_seeds", &largest_cluster_seeds, py::arg("graph"));

  py::enum_<StopRule>(m, "StopRule")
      .value("message_match", StopRule::message_match)
      .value("syndrome_zero", StopRule::syndrome_zero)
      .value("fixed_iters", StopRule::fixed_iters);

  py::enum_<StoppedBy>(m, "StoppedBy")
      .value("message_match", StoppedBy::message_match)
      .value("syndrome_zero", StoppedBy::syndrome_zero)
      .value("max_iters", StoppedBy::max_iters);

  py::class_<DecodeResult>(m, "DecodeResult")
      .def_readonly("bit_marginals", &DecodeResult::bit_marginals)
      .def_readonly("iterations_used", &DecodeResult::iterations_used)
      .def_readonly("stopped_by", &DecodeResult::stopped_by)
      .def_readonly("ops", &DecodeResult::ops);

  m.def("run_decoder", &run_decoder, py::arg("graph"), py::arg("schedule"),
        py::arg("likelihoods"), py::arg("truth"), py::arg("max_iters"), py::arg("rule"));
  m.def("exact_marginals", &exact_marginals, py::arg("factors"), py::arg("likelihoods"),
        py::arg("n_bits"));
  m.def("hard_decision", &hard_decision, py::arg("marginals"));

  py::class_<ParityCheckMatrix>(m, "ParityCheckMatrix")
      .def_readonly("n_cols", &ParityCheckMatrix::n_cols)
      .def_readonly("rows", &ParityCheckMatrix::rows)
      .def_property_readonly("n_rows", &ParityCheckMatrix::n_rows);

  m.def("parse_alist", &parse_alist, py::arg("text"));
  m.def("write_alist", &write_alist, py::arg("h"));
  m.def("load_alist_file", &load_alist_file, py::arg("path"));
  m.def("parse_base_graph", &parse_base_graph, py::arg("text"));
  m.def("load_base_graph_file", &load_base_graph_file, py::arg("path"));
  m.def("expand_base_graph", &expand_base_graph, py::arg("bg"));
  m.def("derive_rate_half_subcode", &derive_rate_half_subcode, py::arg("h_full"), py::arg("k"),
        py::arg("n"));

  py::class_<BaseGraph>(m, "BaseGraph")
      .def_readonly("rows", &BaseGraph::rows)
      .def_readonly("cols", &BaseGraph::cols)
      .def_readonly("lifting", &BaseGraph::lifting)
      .def_readonly("exponents", &BaseGraph::exponents);

  py::class_<SystematicEncoder>(m, "SystematicEncoder")
      .def(py::init<const ParityCheckMatrix&>(), py::arg("h"))
      .def("encode",
           [](const SystematicEncoder& e, const std::vector<std::uint8_t>& m) {
             return e.encode(m);
           })
      .def_property_readonly("k", &SystematicEncoder::k)
      .def_property_readonly("n", &SystematicEncoder::n)
      .def_property_readonly("message_positions", &SystematicEncoder::message_positions);

  m.def("syndrome",
        [](const ParityCheckMatrix& h, const std::vector<std::uint8_t>& bits) {
          return syndrome(h, bits);
        },
        py::arg("h"), py::arg("bits"));
  m.def("parity_factors_from_h", &parity_factors_from_h, py::arg("h"));

  py::class_<ChannelConfig>(m, "ChannelConfig")
      .def(py::init([](double sigma2, double rate, double eb) {
             return ChannelConfig{sigma2, eb, rate};
           }),
           py::arg("sigma2"), py::arg("rate"), py::arg("eb") = 1.0)
      .def_readwrite("sigma2", &ChannelConfig::sigma2)
      .def_readwrite("eb", &ChannelConfig::eb)
      .def_readwrite("rate", &ChannelConfig::rate);

  m.def("snr_db", &snr_db, py::arg("cfg"));
  m.def("sigma2_for_snr_db", &sigma2_for_snr_db, py::arg("target_db"), py::arg("rate"),
        py::arg("eb") = 1.0);
  m.def("transmit",
        [](const std::vector<std::uint8_t>& c, const ChannelConfig& cfg, std::uint64_t seed) {
          return transmit(c, cfg, seed);
        },
        py::arg("codeword"), py::arg("cfg"), py::arg("seed"));
  m.def("likelihood_evidence",
        [](const std::vector<double>& x, const ChannelConfig& cfg) {
          return likelihood_evidence(x, cfg);
        },
        py::arg("received"), py::arg("cfg"));

  py::class_<CompiledCode>(m, "CompiledCode")
      .def(py::init<const ParityCheckMatrix&>(), py::arg("h"))
      .def_readonly("h", &CompiledCode::h)
      .def_readonly("encoder", &CompiledCode::encoder)
      .def_readonly("factor_graph", &CompiledCode::factor_graph)
      .def_readonly("factor_schedule", &CompiledCode::factor_schedule)
      .def_readonly("cluster_graph", &CompiledCode::cluster_graph)
      .def_readonly("cluster_schedule", &CompiledCode::cluster_schedule);

  m.def("profile_single_iteration", &profile_single_iteration, py::arg("graph"),
        py::arg("schedule"), py::arg("likelihoods"));

  py::enum_<GraphSelection>(m, "GraphSelection")
      .value("factor", GraphSelection::factor)
      .value("cluster", GraphSelection::cluster)
      .value("both", GraphSelection::both);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("graphs", &SweepConfig::graphs)
      .def_readwrite("snr_lo_db", &SweepConfig::snr_lo_db)
      .def_readwrite("snr_hi_db", &SweepConfig::snr_hi_db)
      .def_readwrite("snr_points", &SweepConfig::snr_points)
      .def_readwrite("packets", &SweepConfig::packets)
      .def_readwrite("max_iters", &SweepConfig::max_iters)
      .def_readwrite("base_seed", &SweepConfig::base_seed)
      .def_readwrite("stop", &SweepConfig::stop);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("graph", &SweepRow::graph)
      .def_readonly("snr_db", &SweepRow::snr_db)
      .def_readonly("packets", &SweepRow::packets)
      .def_readonly("bit_errors", &SweepRow::bit_errors)
      .def_readonly("ber", &SweepRow::ber)
      .def_readonly("avg_iterations", &SweepRow::avg_iterations)
      .def_readonly("frac_multi_iter", &SweepRow::frac_multi_iter)
      .def_readonly("failures", &SweepRow::failures)
      .def_readonly("seed", &SweepRow::seed);

  py::class_<SweepIterationStats>(m, "SweepIterationStats")
      .def_readonly("graph", &SweepIterationStats::graph)
      .def_readonly("snr_db", &SweepIterationStats::snr_db)
      .def_readonly("matched_packets", &SweepIterationStats::matched_packets)
      .def_readonly("matched_iteration_sum", &SweepIterationStats::matched_iteration_sum)
      .def("mean_iterations_to_decode", &SweepIterationStats::mean_iterations_to_decode);

  m.def(
      "run_ber_sweep",
      [](const CompiledCode& code, const SweepConfig& cfg) { return run_ber_sweep(code, cfg); },
      py::arg("code"), py::arg("cfg"));
  m.def(
      "run_ber_sweep_with_stats",
      [](const CompiledCode& code, const SweepConfig& cfg) {
        std::vector<SweepIterationStats> stats;
        auto rows = run_ber_sweep(code, cfg, &stats);
        return std::make_pair(std::move(rows), std::move(stats));
      },
      py::arg("code"), py::arg("cfg"));
  m.def("sweep_csv", &sweep_csv, py::arg("rows"));

  py::class_<HammingStudyConfig>(m, "HammingStudyConfig")
      .def(py::init<>())
      .def_readwrite("packets", &HammingStudyConfig::packets)
      .def_readwrite("snr_points_db", &HammingStudyConfig::snr_points_db)
      .def_readwrite("max_iters", &HammingStudyConfig::max_iters)
      .def_readwrite("base_seed", &HammingStudyConfig::base_seed);

  py::class_<HammingStudyRow>(m, "HammingStudyRow")
      .def_readonly("snr_db", &HammingStudyRow::snr_db)
      .def_readonly("packets", &HammingStudyRow::packets)
      .def_readonly("ber_factor", &HammingStudyRow::ber_factor)
      .def_readonly("ber_cluster", &HammingStudyRow::ber_cluster)
      .def_readonly("ber_exact", &HammingStudyRow::ber_exact)
      .def_readonly("kl_median_factor", &HammingStudyRow::kl_median_factor)
      .def_readonly("kl_median_cluster", &HammingStudyRow::kl_median_cluster)
      .def_readonly("frac_multi_iter_factor", &HammingStudyRow::frac_multi_iter_factor)
      .def_readonly("frac_multi_iter_cluster", &HammingStudyRow::frac_multi_iter_cluster);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("factor_iteration_ops", &ComparisonReport::factor_iteration_ops)
      .def_readonly("cluster_iteration_ops", &ComparisonReport::cluster_iteration_ops)
      .def_readonly("rows", &ComparisonReport::rows)
      .def_readonly("base_seed", &ComparisonReport::base_seed);

  m.def("run_hamming_study", &run_hamming_study, py::arg("code"), py::arg("cfg"));
  m.def("hamming_study_csv", &hamming_study_csv, py::arg("report"));
  m.def("hamming_study_text", &hamming_study_text, py::arg("report"));
}
