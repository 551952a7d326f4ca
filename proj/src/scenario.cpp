#include "afrelay/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace afrelay {

double ArrivalSpec::effective_bound() const {
  switch (kind) {
    case ArrivalKind::Constant:
      return lambda;
    case ArrivalKind::BernoulliBatch:
      return bound > 0.0 ? bound : 2.0 * lambda;
    case ArrivalKind::Uniform:
      return 2.0 * lambda;
  }
  return 0.0;
}

double ArrivalSpec::batch_probability() const {
  const double b = effective_bound();
  return b > 0.0 ? lambda / b : 0.0;
}

void ArrivalSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ScenarioError("arrivals: lambda must be finite and non-negative");
  }
  if (bound < 0.0 || !std::isfinite(bound)) {
    throw ScenarioError("arrivals: bound must be finite and non-negative");
  }
  if (kind == ArrivalKind::BernoulliBatch && bound > 0.0 && bound < lambda) {
    throw ScenarioError("arrivals: bernoulli bound must be >= lambda");
  }
  if (kind == ArrivalKind::Uniform && bound > 0.0 &&
      std::fabs(bound - 2.0 * lambda) > 1e-12 * (1.0 + lambda)) {
    throw ScenarioError("arrivals: uniform bound is fixed at 2*lambda");
  }
}

void Scenario::validate() const {
  if (alphabet.empty()) throw ScenarioError("scenario: empty alphabet");
  if (support.empty()) throw ScenarioError("scenario: no support states");
  if (!(power > 0.0)) throw ScenarioError("scenario: power must be positive");
  if (!(tolerance > 0.0)) {
    throw ScenarioError("scenario: tolerance must be positive");
  }
  if (sim.horizon == 0) throw ScenarioError("scenario: horizon must be >= 1");
  if (sim.checkpoints == 0) {
    throw ScenarioError("scenario: checkpoints must be >= 1");
  }
  if (sim.seeds.empty()) throw ScenarioError("scenario: seeds must be non-empty");
  arrivals.validate();

  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto& sp = support[i];
    for (std::size_t c = 0; c < 4; ++c) {
      if (!alphabet.contains(sp.state[c])) {
        throw ScenarioError("scenario: state " + sp.state.str() +
                            " uses a gain outside the alphabet");
      }
    }
    if (!(sp.probability > 0.0)) {
      throw ScenarioError("scenario: state probabilities must be positive");
    }
    if (i > 0 && !(support[i - 1].state < sp.state)) {
      throw ScenarioError("scenario: support states must be unique");
    }
    total += sp.probability;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", total);
    throw ScenarioError(std::string("scenario: probabilities sum to ") + buf +
                        ", expected 1");
  }
}

double Scenario::probability_of(const FadingState& f) const {
  for (const auto& sp : support) {
    if (sp.state == f) return sp.probability;
  }
  return 0.0;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || !std::isfinite(v)) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
  return v;
}

std::uint64_t parse_uint(const std::string& tok, int line) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty() || tok[0] == '-') {
    throw ParseError("expected an unsigned integer, got '" + tok + "'", line);
  }
  return v;
}

struct KeyValue {
  std::string key;
  std::string value;
};

bool split_key_value(std::string_view body, KeyValue& kv) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return false;
  kv.key = std::string(trim(body.substr(0, eq)));
  kv.value = std::string(trim(body.substr(eq + 1)));
  return !kv.key.empty();
}

}  // namespace

Scenario parse_scenario_text(std::string_view text) {
  Scenario sc;
  std::vector<double> gains;
  std::vector<SupportPoint> support;
  std::vector<std::pair<FadingState, int>> state_lines;
  bool have_alphabet = false, have_power = false, have_states = false;
  int states_line = 0;

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "alphabet" && section != "power" && section != "states" &&
          section != "arrivals" && section != "sim" && section != "solver") {
        throw ParseError("unknown section '" + section + "'", line_no);
      }
      if (section == "states") states_line = line_no;
      continue;
    }
    if (section.empty()) {
      throw ParseError("content before any [section] header", line_no);
    }

    if (section == "states") {
      const auto toks = split_ws(line);
      if (toks.size() != 5) {
        throw ParseError("state rows need 4 gains and a probability", line_no);
      }
      SupportPoint sp;
      sp.state.gs1 = parse_double(toks[0], line_no);
      sp.state.gs2 = parse_double(toks[1], line_no);
      sp.state.g1d = parse_double(toks[2], line_no);
      sp.state.g2d = parse_double(toks[3], line_no);
      sp.probability = parse_double(toks[4], line_no);
      if (!(sp.probability > 0.0)) {
        throw ParseError("state probability must be positive", line_no);
      }
      support.push_back(sp);
      state_lines.emplace_back(sp.state, line_no);
      have_states = true;
      continue;
    }

    KeyValue kv;
    if (!split_key_value(line, kv)) {
      throw ParseError("expected 'key = value' in [" + section + "]", line_no);
    }

    if (section == "alphabet") {
      if (kv.key != "gains") {
        throw ParseError("unknown key '" + kv.key + "' in [alphabet]", line_no);
      }
      if (have_alphabet) throw ParseError("duplicate key 'gains'", line_no);
      for (const auto& tok : split_ws(kv.value)) {
        gains.push_back(parse_double(tok, line_no));
      }
      if (gains.empty()) throw ParseError("alphabet needs at least one gain", line_no);
      have_alphabet = true;
    } else if (section == "power") {
      if (kv.key != "budget") {
        throw ParseError("unknown key '" + kv.key + "' in [power]", line_no);
      }
      if (have_power) throw ParseError("duplicate key 'budget'", line_no);
      sc.power = parse_double(kv.value, line_no);
      if (!(sc.power > 0.0)) throw ParseError("power budget must be positive", line_no);
      have_power = true;
    } else if (section == "arrivals") {
      if (kv.key == "kind") {
        if (kv.value == "constant") {
          sc.arrivals.kind = ArrivalKind::Constant;
        } else if (kv.value == "bernoulli" || kv.value == "bernoulli-batch") {
          sc.arrivals.kind = ArrivalKind::BernoulliBatch;
        } else if (kv.value == "uniform") {
          sc.arrivals.kind = ArrivalKind::Uniform;
        } else {
          throw ParseError("unknown arrival kind '" + kv.value + "'", line_no);
        }
      } else if (kv.key == "lambda") {
        sc.arrivals.lambda = parse_double(kv.value, line_no);
      } else if (kv.key == "bound") {
        sc.arrivals.bound = parse_double(kv.value, line_no);
      } else {
        throw ParseError("unknown key '" + kv.key + "' in [arrivals]", line_no);
      }
    } else if (section == "sim") {
      if (kv.key == "horizon") {
        sc.sim.horizon = parse_uint(kv.value, line_no);
      } else if (kv.key == "seeds") {
        sc.sim.seeds.clear();
        for (const auto& tok : split_ws(kv.value)) {
          sc.sim.seeds.push_back(parse_uint(tok, line_no));
        }
      } else if (kv.key == "checkpoints") {
        sc.sim.checkpoints = parse_uint(kv.value, line_no);
      } else {
        throw ParseError("unknown key '" + kv.key + "' in [sim]", line_no);
      }
    } else if (section == "solver") {
      if (kv.key != "tolerance") {
        throw ParseError("unknown key '" + kv.key + "' in [solver]", line_no);
      }
      sc.tolerance = parse_double(kv.value, line_no);
    }
  }

  if (!have_alphabet) throw ParseError("missing [alphabet] section", line_no);
  if (!have_power) throw ParseError("missing [power] section", line_no);
  if (!have_states) throw ParseError("missing [states] section", line_no);

  sc.alphabet = Alphabet(std::move(gains));

  std::sort(support.begin(), support.end(),
            [](const SupportPoint& a, const SupportPoint& b) {
              return a.state < b.state;
            });
  sc.support = std::move(support);

  // Per-row membership checks keep the offending line in the message.
  for (const auto& [state, row_line] : state_lines) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (!sc.alphabet.contains(state[c])) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", state[c]);
        throw ParseError("state gain " + std::string(buf) +
                             " is not in the alphabet",
                         row_line);
      }
    }
  }

  try {
    sc.validate();
  } catch (const ScenarioError& e) {
    throw ParseError(e.what(), states_line);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_text(const Scenario& scenario) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  out << "[alphabet]\ngains =";
  for (double g : scenario.alphabet.gains()) out << ' ' << num(g);
  out << "\n\n[power]\nbudget = " << num(scenario.power);
  out << "\n\n[states]\n";
  for (const auto& sp : scenario.support) {
    out << num(sp.state.gs1) << ' ' << num(sp.state.gs2) << ' '
        << num(sp.state.g1d) << ' ' << num(sp.state.g2d) << ' '
        << num(sp.probability) << '\n';
  }
  out << "\n[arrivals]\nkind = ";
  switch (scenario.arrivals.kind) {
    case ArrivalKind::Constant: out << "constant"; break;
    case ArrivalKind::BernoulliBatch: out << "bernoulli"; break;
    case ArrivalKind::Uniform: out << "uniform"; break;
  }
  out << "\nlambda = " << num(scenario.arrivals.lambda);
  if (scenario.arrivals.bound > 0.0) {
    out << "\nbound = " << num(scenario.arrivals.bound);
  }
  out << "\n\n[sim]\nhorizon = " << scenario.sim.horizon << "\nseeds =";
  for (auto s : scenario.sim.seeds) out << ' ' << s;
  out << "\ncheckpoints = " << scenario.sim.checkpoints;
  out << "\n\n[solver]\ntolerance = " << num(scenario.tolerance) << '\n';
  return out.str();
}

}  // namespace afrelay
