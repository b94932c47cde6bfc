#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rof1d/scenario.hpp"

namespace rof1d {

namespace {

[[noreturn]] void parse_fail(const YAML::Node& at, const std::string& msg) {
  std::ostringstream os;
  os << "scenario";
  if (at.IsDefined() && at.Mark().line >= 0) os << " line " << at.Mark().line + 1;
  os << ": " << msg;
  throw Error(ErrorCode::parse, os.str());
}

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorCode::parse, "scenario: " + msg);
}

// Accepts plain YAML numbers and exact fractions written as "p/q".
double real_field(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) parse_fail(n, "field '" + field + "' must be a number");
  const std::string text = n.Scalar();
  double v = 0.0;
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const double p = YAML::Node(text.substr(0, slash)).as<double>();
      const double q = YAML::Node(text.substr(slash + 1)).as<double>();
      if (q == 0.0) parse_fail(n, "field '" + field + "' divides by zero");
      v = p / q;
    } else {
      v = n.as<double>();
    }
  } catch (const YAML::BadConversion&) {
    parse_fail(n, "field '" + field + "' is not a number: '" + text + "'");
  }
  if (!std::isfinite(v)) parse_fail(n, "field '" + field + "' must be finite");
  return v;
}

std::vector<double> real_list(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence()) parse_fail(n, "field '" + field + "' must be a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    out.push_back(real_field(n[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class T>
T scalar_field(const YAML::Node& n, const std::string& field, const char* what) {
  try {
    return n.as<T>();
  } catch (const YAML::BadConversion&) {
    parse_fail(n, "field '" + field + "' must be " + what);
  }
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!known.contains(key)) parse_fail(kv.first, "unknown field '" + where + key + "'");
  }
}

Task task_from(const YAML::Node& n) {
  const auto s = scalar_field<std::string>(n, "task", "a string");
  for (Task t : {Task::solve, Task::flow, Task::attainment, Task::threshold,
                 Task::counterexample, Task::suite}) {
    if (s == to_string(t)) return t;
  }
  parse_fail(n, "unknown task '" + s + "'");
}

bool needs_f(const Scenario& s) {
  switch (s.task) {
    case Task::solve:
    case Task::flow:
    case Task::attainment:
    case Task::threshold: return true;
    case Task::counterexample: return s.options.kind == "large-gap";
    case Task::suite: return false;
  }
  return false;
}

}  // namespace

const char* to_string(Task t) {
  switch (t) {
    case Task::solve: return "solve";
    case Task::flow: return "flow";
    case Task::attainment: return "attainment";
    case Task::threshold: return "threshold";
    case Task::counterexample: return "counterexample";
    case Task::suite: return "suite";
  }
  return "?";
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    parse_fail("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull() || !root.IsDefined()) parse_fail("empty scenario");
  if (!root.IsMap()) parse_fail(root, "top level must be a mapping");
  reject_unknown(root, {"name", "task", "f", "phi", "lambda", "options"}, "");

  Scenario s;
  if (!root["name"]) parse_fail("missing field 'name'");
  s.name = scalar_field<std::string>(root["name"], "name", "a string");
  if (s.name.empty()) parse_fail(root["name"], "field 'name' must not be empty");
  if (!root["task"]) parse_fail("missing field 'task'");
  s.task = task_from(root["task"]);

  if (const auto o = root["options"]) {
    if (!o.IsMap()) parse_fail(o, "field 'options' must be a mapping");
    reject_unknown(o, {"rational", "svg", "oracle_grid", "kind", "k", "eps", "seed", "count",
                       "prox_dt"},
                   "options.");
    auto& opt = s.options;
    if (o["rational"]) opt.rational = scalar_field<bool>(o["rational"], "options.rational", "a boolean");
    if (o["svg"]) opt.svg = scalar_field<bool>(o["svg"], "options.svg", "a boolean");
    if (o["oracle_grid"]) {
      const auto g = scalar_field<long long>(o["oracle_grid"], "options.oracle_grid", "an integer");
      if (g < 0 || (g > 0 && g < 8)) parse_fail(o["oracle_grid"], "field 'options.oracle_grid' must be 0 or >= 8");
      opt.oracle_grid = static_cast<std::size_t>(g);
    }
    if (o["kind"]) opt.kind = scalar_field<std::string>(o["kind"], "options.kind", "a string");
    if (o["k"]) opt.k = real_field(o["k"], "options.k");
    if (o["eps"]) opt.eps = real_list(o["eps"], "options.eps");
    if (o["seed"]) opt.seed = scalar_field<std::uint64_t>(o["seed"], "options.seed", "a non-negative integer");
    if (o["count"]) {
      const auto c = scalar_field<long long>(o["count"], "options.count", "an integer");
      if (c < 1) parse_fail(o["count"], "field 'options.count' must be positive");
      opt.count = static_cast<std::size_t>(c);
    }
    if (o["prox_dt"]) {
      opt.prox_dt = real_field(o["prox_dt"], "options.prox_dt");
      if (opt.prox_dt < 0) parse_fail(o["prox_dt"], "field 'options.prox_dt' must be non-negative");
    }
  }

  if (const auto f = root["f"]) {
    if (!f.IsMap()) parse_fail(f, "field 'f' must be a mapping");
    reject_unknown(f, {"domain_length", "breakpoints", "values"}, "f.");
    if (!f["domain_length"]) parse_fail(f, "missing field 'f.domain_length'");
    if (!f["values"]) parse_fail(f, "missing field 'f.values'");
    const double L = real_field(f["domain_length"], "f.domain_length");
    std::vector<double> bps;
    if (f["breakpoints"]) bps = real_list(f["breakpoints"], "f.breakpoints");
    std::vector<double> vals = real_list(f["values"], "f.values");
    try {
      s.f.emplace(L, std::move(bps), std::move(vals));
    } catch (const Error& e) {
      parse_fail(f, std::string("field 'f': ") + e.what());
    }
  }
  if (const auto p = root["phi"]) {
    const auto v = real_list(p, "phi");
    if (v.size() != 2) parse_fail(p, "field 'phi' must have exactly two entries [a, b]");
    s.phi = BoundaryPair{v[0], v[1]};
  }
  if (const auto l = root["lambda"]) {
    s.lambda = real_field(l, "lambda");
    if (!(*s.lambda > 0.0)) parse_fail(l, "field 'lambda' must be positive");
  }

  const std::string& kind = s.options.kind;
  auto kind_in = [&](std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
      if (kind == a) return;
    }
    parse_fail("task " + std::string(to_string(s.task)) + " does not accept kind '" + kind + "'");
  };
  switch (s.task) {
    case Task::attainment: kind_in({"", "classify", "trace-inheritance", "small-data"}); break;
    case Task::counterexample: kind_in({"large-gap", "instability-a", "instability-b"}); break;
    case Task::flow: kind_in({"", "example-s4"}); break;
    default: kind_in({""}); break;
  }

  const std::string t = to_string(s.task);
  if (needs_f(s) && !s.f) parse_fail("missing field 'f' required by task " + t);
  const bool phi_free = (s.task == Task::attainment && !kind.empty() && kind != "classify") ||
                        s.task == Task::counterexample || s.task == Task::suite;
  if (!phi_free && !s.phi) parse_fail("missing field 'phi' required by task " + t);
  const bool needs_lambda =
      s.task == Task::solve || s.task == Task::attainment || kind == "large-gap";
  if (needs_lambda && !s.lambda) parse_fail("missing field 'lambda' required by task " + t);
  if ((kind == "instability-a" || kind == "instability-b") && s.f.has_value() != s.phi.has_value()) {
    parse_fail("instability scenarios give both 'f' and 'phi' or neither");
  }
  for (double e : s.options.eps) {
    if (!(e > 0.0)) parse_fail("field 'options.eps' entries must be positive");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse, "scenario: cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s) {
  YAML::Emitter out;
  auto num = [](double v) { return format_number(v); };
  auto flow_list = [&](const auto& range) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double v : range) out << num(v);
    out << YAML::EndSeq;
  };
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "task" << YAML::Value << to_string(s.task);
  if (s.f) {
    out << YAML::Key << "f" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "domain_length" << YAML::Value << num(s.f->length());
    out << YAML::Key << "breakpoints" << YAML::Value;
    flow_list(s.f->breakpoints());
    out << YAML::Key << "values" << YAML::Value;
    flow_list(s.f->values());
    out << YAML::EndMap;
  }
  if (s.phi) {
    out << YAML::Key << "phi" << YAML::Value;
    flow_list(std::vector<double>{s.phi->a, s.phi->b});
  }
  if (s.lambda) out << YAML::Key << "lambda" << YAML::Value << num(*s.lambda);

  const ScenarioOptions& o = s.options;
  const ScenarioOptions d;
  out << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rational" << YAML::Value << o.rational;
  out << YAML::Key << "svg" << YAML::Value << o.svg;
  if (o.oracle_grid) out << YAML::Key << "oracle_grid" << YAML::Value << o.oracle_grid;
  if (!o.kind.empty()) out << YAML::Key << "kind" << YAML::Value << o.kind;
  if (o.k) out << YAML::Key << "k" << YAML::Value << num(*o.k);
  if (!o.eps.empty()) {
    out << YAML::Key << "eps" << YAML::Value;
    flow_list(o.eps);
  }
  if (o.seed != d.seed) out << YAML::Key << "seed" << YAML::Value << o.seed;
  if (o.count != d.count) out << YAML::Key << "count" << YAML::Value << o.count;
  if (o.prox_dt > 0) out << YAML::Key << "prox_dt" << YAML::Value << num(o.prox_dt);
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::optional<std::string> RunReport::get(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

}  // namespace rof1d
