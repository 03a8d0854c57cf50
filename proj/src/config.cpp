#include "rankproc/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rankproc/errors.hpp"

namespace rankproc::io {

namespace {

ConfigError invalid(const std::string& message) { return ConfigError("CONFIG_INVALID", message); }

const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw invalid(std::string("missing field \"") + key + "\"");
  }
  return obj.at(key);
}

std::vector<double> real_vector(const Json& j, const char* what) {
  if (!j.is_array()) throw invalid(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw invalid(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Ranking ranking_from_key(const std::string& key) {
  Json parsed;
  try {
    parsed = Json::parse(key);
  } catch (const Json::parse_error&) {
    throw invalid("table key \"" + key + "\" is not a ranking array");
  }
  return ranking_from_json(parsed);
}

DiscreteVectorDistribution initial_from_json(const Json& config, int d) {
  if (!config.contains("initial")) return DiscreteVectorDistribution::zeros(d);
  const auto& init = config.at("initial");
  if (init.is_string()) {
    if (init.get<std::string>() != "zeros") throw invalid("unknown initial shorthand");
    return DiscreteVectorDistribution::zeros(d);
  }
  return distribution_from_json(init, d);
}

std::optional<int> declared_dimension(const Json& config) {
  if (!config.contains("d")) return std::nullopt;
  const auto& d = config.at("d");
  if (!d.is_number_integer() || d.get<int>() < 1) throw invalid("\"d\" must be a positive integer");
  return d.get<int>();
}

ProcessSpec table_from_json(const Json& config) {
  const auto d = declared_dimension(config);
  if (!d) throw invalid("table model needs \"d\"");
  const auto& table = require(config, "table");
  if (!table.is_object()) throw invalid("\"table\" must be an object keyed by ranking");
  std::map<Ranking, IncrementLaw> laws;
  for (const auto& [key, value] : table.items()) {
    auto r = ranking_from_key(key);
    if (r.dimension() != *d) throw invalid("table key " + key + " has the wrong dimension");
    if (laws.count(r)) throw invalid("duplicate table entry for " + r.to_string());
    laws.emplace(std::move(r), distribution_from_json(value, *d));
  }
  for (const auto& r : enumerate_rankings(*d)) {
    if (!laws.count(r)) throw invalid("table is missing ranking " + r.to_string());
  }
  return ProcessSpec::from_table(*d, laws, initial_from_json(config, *d));
}

ProcessSpec urn_from_json(const Json& config) {
  const auto a = real_vector(require(config, "a"), "\"a\"");
  const auto lambda = real_vector(require(config, "lambda"), "\"lambda\"");
  const auto d = declared_dimension(config);
  if (d && *d != static_cast<int>(a.size())) throw invalid("\"d\" does not match \"a\"");
  const int dim = static_cast<int>(a.size());
  if (dim < 1) throw invalid("\"a\" must not be empty");
  return build_additive_urn(a, lambda, initial_from_json(config, dim));
}

ProcessSpec click_from_json(const Json& config) {
  const auto u = real_vector(require(config, "u"), "\"u\"");
  const auto d = declared_dimension(config);
  if (d && *d != static_cast<int>(u.size())) throw invalid("\"d\" does not match \"u\"");
  const int dim = static_cast<int>(u.size());
  if (dim < 1) throw invalid("\"u\" must not be empty");
  const auto& exam = require(config, "exam");
  ExamFunction fn;
  if (exam.contains("positional")) {
    auto slots = real_vector(exam.at("positional"), "\"exam.positional\"");
    if (static_cast<int>(slots.size()) != dim) throw invalid("need one slot per item");
    fn = positional_examination(std::move(slots));
  } else if (exam.contains("table")) {
    std::map<Ranking, std::vector<double>> by_ranking;
    for (const auto& [key, value] : exam.at("table").items()) {
      auto probs = real_vector(value, "\"exam.table\" entries");
      if (static_cast<int>(probs.size()) != dim) throw invalid("exam entry " + key + " has wrong length");
      by_ranking[ranking_from_key(key)] = std::move(probs);
    }
    for (const auto& r : enumerate_rankings(dim)) {
      if (!by_ranking.count(r)) throw invalid("exam table is missing ranking " + r.to_string());
    }
    fn = [by_ranking = std::move(by_ranking)](const Ranking& r, std::size_t i) {
      return by_ranking.at(r).at(i);
    };
  } else {
    throw invalid("\"exam\" needs \"positional\" or \"table\"");
  }
  return build_click_model(u, fn, initial_from_json(config, dim));
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Json to_json(const Ranking& r) {
  return Json(std::vector<int>(r.positions().begin(), r.positions().end()));
}

Ranking ranking_from_json(const Json& j) {
  if (!j.is_array()) throw invalid("ranking must be an array of positions");
  std::vector<int> pos;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw invalid("ranking positions must be integers");
    pos.push_back(v.get<int>());
  }
  if (!is_valid_ranking(pos)) throw invalid("not a valid ranking: " + j.dump());
  return Ranking(std::move(pos));
}

Json to_json(const DiscreteVectorDistribution& dist) {
  Json atoms = Json::array();
  for (std::size_t k = 0; k < dist.atom_count(); ++k) {
    const auto v = dist.atom(k);
    atoms.push_back({{"v", std::vector<double>(v.begin(), v.end())}, {"p", dist.prob(k)}});
  }
  return {{"d", dist.dimension()}, {"atoms", std::move(atoms)}};
}

DiscreteVectorDistribution distribution_from_json(const Json& j,
                                                  std::optional<int> expected_dimension) {
  if (!j.is_object()) throw invalid("distribution must be an object");
  int d = 0;
  if (j.contains("d")) {
    if (!j.at("d").is_number_integer()) throw invalid("distribution \"d\" must be an integer");
    d = j.at("d").get<int>();
    if (expected_dimension && d != *expected_dimension) {
      throw invalid("distribution has d = " + std::to_string(d) + ", expected " +
                    std::to_string(*expected_dimension));
    }
  } else if (expected_dimension) {
    d = *expected_dimension;
  } else {
    throw invalid("distribution needs \"d\"");
  }
  const auto& atoms_json = require(j, "atoms");
  if (!atoms_json.is_array()) throw invalid("\"atoms\" must be an array");
  std::vector<Atom> atoms;
  for (const auto& a : atoms_json) {
    const auto& p = require(a, "p");
    if (!p.is_number()) throw invalid("atom \"p\" must be a number");
    atoms.push_back({real_vector(require(a, "v"), "atom \"v\""), p.get<double>()});
  }
  return DiscreteVectorDistribution(d, std::move(atoms));
}

ProcessSpec process_from_json(const Json& config) {
  if (!config.is_object()) throw invalid("config must be a JSON object");
  if (!config.contains("schema_version")) {
    throw ConfigError("SCHEMA_VERSION_UNSUPPORTED", "config has no \"schema_version\"");
  }
  const auto& version = config.at("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ConfigError("SCHEMA_VERSION_UNSUPPORTED",
                      "unsupported schema_version " + version.dump() + ", expected 1");
  }
  const auto& model = require(config, "model");
  if (!model.is_string()) throw invalid("\"model\" must be a string");
  const auto name = model.get<std::string>();
  try {
    if (name == "table") return table_from_json(config);
    if (name == "additive_urn") return urn_from_json(config);
    if (name == "click") return click_from_json(config);
  } catch (const Json::exception& e) {
    throw invalid(e.what());
  }
  throw invalid("unknown model \"" + name + "\"");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("CONFIG_NOT_FOUND", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("CONFIG_PARSE_ERROR", path.string() + ": " + e.what());
  }
}

ProcessSpec load_process_config(const std::filesystem::path& path) {
  return process_from_json(read_json_file(path));
}

Json process_to_json(const ProcessSpec& spec) {
  Json table = Json::object();
  const auto& index = spec.rankings();
  for (std::size_t k = 0; k < index.size(); ++k) {
    table[index.at(k).to_string()] = to_json(spec.law_at(k).discrete());
  }
  return {{"schema_version", kSchemaVersion},
          {"model", "table"},
          {"d", spec.dimension()},
          {"table", std::move(table)},
          {"initial", to_json(spec.initial())}};
}

namespace {

Json near_ties_json(const std::vector<NearTie>& ties) {
  Json out = Json::array();
  for (const auto& t : ties) {
    out.push_back({{"ranking", to_json(t.ranking)},
                   {"i", t.i + 1},
                   {"j", t.j + 1},
                   {"difference", t.difference}});
  }
  return out;
}

}  // namespace

Json to_json(const AnalysisReport& report, const ProcessSpec& spec) {
  const auto d = static_cast<std::size_t>(report.dominance.d);
  Json matrix = Json::array();
  for (std::size_t i = 0; i < d; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < d; ++j) row.push_back(to_string(report.dominance.at(i, j)));
    matrix.push_back(std::move(row));
  }
  Json violations = Json::array();
  for (const auto& v : report.dominance.violations) {
    violations.push_back(
        {{"i", v.i + 1}, {"j", v.j + 1}, {"ranking", to_json(v.ranking)}, {"reason", v.reason}});
  }
  Json terminal = Json::array();
  for (const auto& r : report.terminal.terminal) terminal.push_back(to_json(r));
  Json witnesses = Json::array();
  for (const auto& w : report.terminal.witnesses) {
    witnesses.push_back({{"ranking", to_json(w.ranking)},
                         {"i", w.i + 1},
                         {"j", w.j + 1},
                         {"condition", static_cast<int>(w.condition)}});
  }
  Json reach = {{"holds", report.reachability.holds}, {"witness", nullptr}};
  if (report.reachability.failing_ranking) {
    std::vector<std::size_t> perm;
    for (auto p : report.reachability.failing_permutation) perm.push_back(p + 1);
    reach["witness"] = {{"ranking", to_json(*report.reachability.failing_ranking)},
                        {"permutation", perm}};
  }
  Json fixed = Json::array();
  for (const auto& f : report.fixed_points) {
    fixed.push_back({{"ranking", to_json(f.ranking)}, {"point", f.point}});
  }
  Json near = near_ties_json(report.dominance.near_ties);
  for (auto& t : near_ties_json(report.terminal.near_ties)) near.push_back(std::move(t));
  return {{"schema_version", kSchemaVersion},
          {"kind", "analysis"},
          {"d", spec.dimension()},
          {"model", spec.model()},
          {"spec_digest", spec_digest(spec)},
          {"dominance",
           {{"matrix", std::move(matrix)},
            {"ordering_assumption_satisfied", report.dominance.ordering_assumption_satisfied},
            {"violations", std::move(violations)}}},
          {"terminal", {{"rankings", std::move(terminal)}, {"witnesses", std::move(witnesses)}}},
          {"all_pairs_separate", report.all_pairs_separate},
          {"reachability", std::move(reach)},
          {"polya_urn", report.polya_urn},
          {"urn_fixed_points", std::move(fixed)},
          {"near_ties", std::move(near)},
          {"notes", spec.notes()},
          {"lint", lint_spec(spec)}};
}

Json to_json(const EnsembleSummary& summary) {
  Json runs = Json::array();
  for (std::size_t k = 0; k < summary.runs.size(); ++k) {
    const auto& r = summary.runs[k];
    Json run = {{"run_index", k},
                {"seed", r.seed},
                {"final_state", r.final_state},
                {"settled", r.settled_ranking ? to_json(*r.settled_ranking) : Json(nullptr)},
                {"last_change_step", r.last_change_step}};
    if (!r.trace.empty()) {
      Json trace = Json::array();
      for (const auto& c : r.trace) trace.push_back({{"step", c.step}, {"ranking", to_json(c.ranking)}});
      run["trace"] = std::move(trace);
    }
    runs.push_back(std::move(run));
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "ensemble"},
          {"master_seed", summary.master_seed},
          {"spec_digest", summary.spec_digest},
          {"horizon", summary.horizon},
          {"window", summary.window},
          {"runs", std::move(runs)}};
}

EnsembleSummary ensemble_from_json(const Json& j) {
  try {
    if (!j.is_object() || j.value("kind", "") != "ensemble") {
      throw invalid("not an ensemble summary");
    }
    if (j.value("schema_version", 0) != kSchemaVersion) {
      throw ConfigError("SCHEMA_VERSION_UNSUPPORTED", "unsupported ensemble schema_version");
    }
    EnsembleSummary s;
    s.master_seed = require(j, "master_seed").get<std::uint64_t>();
    s.spec_digest = require(j, "spec_digest").get<std::string>();
    s.horizon = require(j, "horizon").get<std::int64_t>();
    s.window = require(j, "window").get<std::int64_t>();
    for (const auto& r : require(j, "runs")) {
      RunSummary run;
      run.seed = require(r, "seed").get<std::uint64_t>();
      run.horizon = s.horizon;
      run.final_state = real_vector(require(r, "final_state"), "\"final_state\"");
      if (!require(r, "settled").is_null()) run.settled_ranking = ranking_from_json(r.at("settled"));
      run.last_change_step = require(r, "last_change_step").get<std::int64_t>();
      if (r.contains("trace")) {
        for (const auto& c : r.at("trace")) {
          run.trace.push_back({c.at("step").get<std::int64_t>(), ranking_from_json(c.at("ranking"))});
        }
      }
      s.runs.push_back(std::move(run));
    }
    return s;
  } catch (const Json::exception& e) {
    throw invalid(std::string("malformed ensemble summary: ") + e.what());
  }
}

std::string to_csv(const EnsembleSummary& summary) {
  std::ostringstream os;
  const std::size_t d = summary.runs.empty() ? 0 : summary.runs.front().final_state.size();
  os << "run_index,settled,last_change_step";
  for (std::size_t i = 0; i < d; ++i) os << ",x" << (i + 1);
  os << '\n';
  for (std::size_t k = 0; k < summary.runs.size(); ++k) {
    const auto& r = summary.runs[k];
    os << k << ',';
    if (r.settled_ranking) {
      os << '"' << r.settled_ranking->to_string() << '"';
    } else {
      os << 'U';
    }
    os << ',' << r.last_change_step;
    for (double v : r.final_state) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

Json to_json(const Estimate& e) {
  return {{"successes", e.successes},
          {"runs", e.runs},
          {"estimate", e.value},
          {"standard_error", e.standard_error}};
}

Json to_json(const LimitLawReport& report) {
  auto freq = [](const std::vector<RankingFrequency>& v) {
    Json out = Json::array();
    for (const auto& f : v) {
      out.push_back({{"ranking", to_json(f.ranking)},
                     {"count", f.count},
                     {"frequency", f.frequency},
                     {"terminal", f.terminal}});
    }
    return out;
  };
  Json slln = Json::array();
  for (const auto& s : report.slln) {
    slln.push_back({{"ranking", to_json(s.ranking)},
                    {"runs", s.runs},
                    {"conditional_mean", s.conditional_mean},
                    {"expected", s.expected},
                    {"max_error", s.max_error}});
  }
  Json ks = Json::array();
  for (const auto& k : report.ks) {
    ks.push_back({{"ranking", to_json(k.ranking)},
                  {"component", k.component + 1},
                  {"runs", k.runs},
                  {"statistic", k.statistic},
                  {"critical", k.critical},
                  {"pass", k.pass}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "limit_law_report"},
          {"total_runs", report.total_runs},
          {"frequencies", freq(report.frequencies)},
          {"undetermined", report.undetermined},
          {"undetermined_fraction", report.undetermined_fraction},
          {"anomalies", freq(report.anomalies)},
          {"slln", std::move(slln)},
          {"ks", std::move(ks)},
          {"notes", report.notes}};
}

}  // namespace rankproc::io
