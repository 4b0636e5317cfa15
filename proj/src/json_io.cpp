#include "dixmier/json_io.hpp"

#include <fstream>
#include <sstream>

namespace dixmier::io {

namespace {

json complex_to_json(Cx z) { return json::array({z.real(), z.imag()}); }

Cx parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("json: complex number must be [re, im]");
  }
  return Cx(j[0].get<double>(), j[1].get<double>());
}

json matrix_rows(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat parse_matrix_rows(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("json: bad matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[static_cast<size_t>(r)].size()) != cols) {
      throw std::invalid_argument("json: ragged matrix");
    }
    for (int c = 0; c < cols; ++c) {
      m(r, c) = parse_complex(j[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    }
  }
  return m;
}

}  // namespace

json to_json(const FdAlgebra& a) { return json{{"blocks", a.block_dims()}}; }

FdAlgebra parse_algebra(const json& j) {
  return FdAlgebra(j.at("blocks").get<std::vector<int>>());
}

json to_json(const Element& e) {
  json blocks = json::array();
  for (const Mat& b : e.blocks()) blocks.push_back(matrix_rows(b));
  return json{{"blocks", std::move(blocks)}};
}

Element parse_element(const json& j) {
  const json& blocks = j.at("blocks");
  std::vector<Mat> out;
  out.reserve(blocks.size());
  for (const json& b : blocks) {
    Mat m = parse_matrix_rows(b);
    if (m.rows() != m.cols()) throw std::invalid_argument("json: element block not square");
    out.push_back(std::move(m));
  }
  return Element(std::move(out));
}

json to_json(const Tuple& t) {
  json entries = json::array();
  for (const Element& e : t.entries) entries.push_back(to_json(e));
  return json{{"entries", std::move(entries)}};
}

Tuple parse_tuple(const json& j) {
  std::vector<Element> entries;
  for (const json& e : j.at("entries")) entries.push_back(parse_element(e));
  return Tuple(std::move(entries));
}

json to_json(const State& s) {
  json densities = json::array();
  for (const Mat& d : s.densities()) densities.push_back(matrix_rows(d));
  std::vector<double> w(s.block_weights().data(),
                        s.block_weights().data() + s.block_weights().size());
  return json{{"weights", std::move(w)}, {"densities", std::move(densities)}};
}

State parse_state(const json& j) {
  const std::vector<double> w = j.at("weights").get<std::vector<double>>();
  std::vector<Mat> ds;
  for (const json& d : j.at("densities")) ds.push_back(parse_matrix_rows(d));
  RVec weights = Eigen::Map<const RVec>(w.data(), static_cast<int>(w.size()));
  return State(std::move(weights), std::move(ds));
}

json to_json(const TracialState& t) {
  std::vector<double> w(t.weights().data(), t.weights().data() + t.weights().size());
  return json{{"weights", std::move(w)}};
}

TracialState parse_tracial_state(const json& j) {
  const std::vector<double> w = j.at("weights").get<std::vector<double>>();
  return TracialState(Eigen::Map<const RVec>(w.data(), static_cast<int>(w.size())));
}

json to_json(const MixingOperator& t) {
  json terms = json::array();
  for (const auto& term : t.terms()) {
    terms.push_back(json{{"weight", term.weight},
                         {"unitary", to_json(term.unitary.element())}});
  }
  return json{{"terms", std::move(terms)}};
}

MixingOperator parse_mixing(const json& j) {
  std::vector<MixingOperator::Term> terms;
  for (const json& t : j.at("terms")) {
    terms.push_back({t.at("weight").get<double>(),
                     Unitary(parse_element(t.at("unitary")))});
  }
  return MixingOperator(std::move(terms));
}

json to_json(const Instance& inst) {
  json j{{"spec",
          {{"seed", inst.spec.seed},
           {"blocks", inst.spec.block_dims},
           {"n", inst.spec.n},
           {"m", inst.spec.m},
           {"kind", kind_name(inst.spec.kind)}}},
         {"algebra", to_json(inst.algebra)}};
  json tuples = json::array();
  for (const Tuple& t : inst.tuples) tuples.push_back(to_json(t));
  j["tuples"] = std::move(tuples);
  if (inst.planted.has_value()) {
    j["planted"] = json{{"block", inst.planted->block},
                        {"value", complex_to_json(inst.planted->value)}};
  }
  return j;
}

Instance parse_instance(const json& j) {
  Instance inst;
  const json& spec = j.at("spec");
  inst.spec.seed = spec.at("seed").get<std::uint64_t>();
  inst.spec.block_dims = spec.at("blocks").get<std::vector<int>>();
  inst.spec.n = spec.at("n").get<int>();
  inst.spec.m = spec.at("m").get<int>();
  const auto kind = kind_from_name(spec.at("kind").get<std::string>());
  if (!kind.has_value()) throw std::invalid_argument("json: unknown instance kind");
  inst.spec.kind = *kind;
  inst.algebra = parse_algebra(j.at("algebra"));
  for (const json& t : j.at("tuples")) inst.tuples.push_back(parse_tuple(t));
  if (j.contains("planted")) {
    PlantedComponent p;
    p.block = j["planted"].at("block").get<int>();
    p.value = parse_complex(j["planted"].at("value"));
    inst.planted = p;
  }
  return inst;
}

json to_json(const ConditionICertificate& cert) {
  json ideals = json::array();
  for (const IdealCertificate& ic : cert.ideals) {
    json j{{"block", ic.block},
           {"certified", ic.state.has_value()},
           {"residual", ic.residual},
           {"separation", ic.separation}};
    if (ic.state.has_value()) j["state"] = to_json(*ic.state);
    if (ic.witness.has_value()) j["witness"] = to_json(*ic.witness);
    ideals.push_back(std::move(j));
  }
  json j{{"commutator_ok", cert.commutator_ok}, {"ideals", std::move(ideals)}};
  if (!cert.commutator_ok) {
    j["obstruction"] = json{{"basis", cert.obstruction_basis},
                            {"block", cert.obstruction_block},
                            {"trace", complex_to_json(cert.obstruction_trace)}};
  }
  return j;
}

json to_json(const DualityReport& rep) {
  json ops = json::array();
  for (const MixingOperator& t : rep.primal.operators) ops.push_back(to_json(t));
  json ideal_bounds = json::array();
  for (const StateBoundResult& sb : rep.ideal_bounds) {
    json states = json::array();
    for (const State& s : sb.states) states.push_back(to_json(s));
    ideal_bounds.push_back(json{{"block", sb.block},
                                {"value", sb.value},
                                {"stationarity_gap", sb.stationarity_gap},
                                {"states", std::move(states)}});
  }
  return json{{"upper", rep.upper},
              {"lower", rep.lower},
              {"gap", rep.gap},
              {"weak_duality_ok", rep.weak_duality_ok},
              {"under_converged", rep.under_converged},
              {"witnesses",
               {{"operators", std::move(ops)},
                {"trace_state", to_json(rep.trace.witness)},
                {"trace_value", rep.trace.value},
                {"ideal_bounds", std::move(ideal_bounds)}}}};
}

DualityReport parse_duality_report(const json& j) {
  DualityReport rep;
  rep.upper = j.at("upper").get<double>();
  rep.lower = j.at("lower").get<double>();
  rep.gap = j.at("gap").get<double>();
  rep.weak_duality_ok = j.at("weak_duality_ok").get<bool>();
  rep.under_converged = j.at("under_converged").get<bool>();
  const json& w = j.at("witnesses");
  rep.primal.value = rep.upper;
  for (const json& op : w.at("operators")) {
    rep.primal.operators.push_back(parse_mixing(op));
  }
  rep.trace.witness = parse_tracial_state(w.at("trace_state"));
  rep.trace.value = w.at("trace_value").get<double>();
  for (const json& ib : w.at("ideal_bounds")) {
    StateBoundResult sb;
    sb.block = ib.at("block").get<int>();
    sb.value = ib.at("value").get<double>();
    sb.stationarity_gap = ib.at("stationarity_gap").get<double>();
    for (const json& s : ib.at("states")) sb.states.push_back(parse_state(s));
    rep.ideal_bounds.push_back(std::move(sb));
  }
  return rep;
}

json to_json(const HMapReport& rep) {
  auto check = [](const HMapCheck& c) {
    return json{{"ok", c.ok}, {"defect", c.defect}};
  };
  json j{{"accepted", rep.accepted},
         {"failure", rep.failure},
         {"deviation", rep.deviation},
         {"point_norm_error", rep.point_norm_error},
         {"checks",
          {{"central", check(rep.central)},
           {"module_linear", check(rep.module_linear)},
           {"positive", check(rep.positive)},
           {"unital", check(rep.unital)},
           {"trace", check(rep.trace_condition)},
           {"ideal", check(rep.ideal_condition)}}}};
  if (rep.realization.has_value()) j["realization"] = to_json(*rep.realization);
  return j;
}

json matrix_to_json(const Mat& m) { return matrix_rows(m); }

Mat parse_square_matrix(const json& j) {
  Mat m = parse_matrix_rows(j);
  if (m.rows() != m.cols()) throw std::invalid_argument("json: matrix not square");
  return m;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

json load_file(const std::string& path) { return json::parse(read_file(path)); }

std::string duality_csv_header() {
  return "instance_id,B,dims,m,n,lower,upper,gap,seconds";
}

std::string duality_csv_row(const std::string& instance_id, const FdAlgebra& a, int m,
                            int n, const DualityReport& rep, double seconds) {
  std::ostringstream os;
  os << instance_id << "," << a.num_blocks() << ",";
  for (size_t i = 0; i < a.block_dims().size(); ++i) {
    if (i > 0) os << "x";
    os << a.block_dims()[i];
  }
  os.precision(12);
  os << "," << m << "," << n << "," << rep.lower << "," << rep.upper << "," << rep.gap
     << "," << seconds;
  return os.str();
}

}  // namespace dixmier::io
