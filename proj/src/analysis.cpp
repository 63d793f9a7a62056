#include "qpc/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpc/format.hpp"

namespace qpc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string(what) + " must be a non-negative integer, got '" + std::string(text) +
                                "'");
  }
  return v;
}

}  // namespace

std::pair<NoiseKind, NoiseKind> kind_pair_from_string(std::string_view tag) {
  const auto dash = tag.find('-');
  if (dash == std::string_view::npos) {
    throw std::invalid_argument("kind pair must look like ad-bf, got '" + std::string(tag) + "'");
  }
  return {noise_kind_from_string(tag.substr(0, dash)), noise_kind_from_string(tag.substr(dash + 1))};
}

std::string to_string(std::pair<NoiseKind, NoiseKind> pair) {
  return std::string(to_string(pair.first)) + "-" + std::string(to_string(pair.second));
}

std::string GridRow::family_name() const {
  FormulaCheck c{dispatch_formula(first, second, initial).family, trips};
  return c.name();
}

std::vector<GridRow> fidelity_grid(const GridRequest& request) {
  const std::vector<double> grid = probability_grid(request.step);
  std::vector<std::pair<NoiseKind, NoiseKind>> pairs = request.kind_pairs;
  if (pairs.empty()) {
    for (NoiseKind a : kAllNoiseKinds)
      for (NoiseKind b : kAllNoiseKinds) pairs.emplace_back(a, b);
  }
  std::vector<GridRow> rows;
  rows.reserve(grid.size() * grid.size() * request.trips.size() * pairs.size() * 4);
  for (double p1 : grid) {
    for (double p2 : grid) {
      for (Trips trips : request.trips) {
        for (const auto& [a, b] : pairs) {
          for (BellState s : kAllBellStates) {
            const NoiseScenario sc{{a, p1}, {b, p2}, s, trips};
            GridRow r{p1, p2, a, b, s, trips, closed_form(sc, request.edition), oracle_fidelity(sc), 0.0};
            r.abs_deviation = std::abs(r.closed_form - r.oracle);
            if (std::isnan(r.abs_deviation)) r.abs_deviation = INFINITY;
            rows.push_back(r);
          }
        }
      }
    }
  }
  return rows;
}

std::vector<std::string> failing_families(const std::vector<GridRow>& rows, double tolerance) {
  std::set<std::string> names;
  for (const auto& r : rows)
    if (!(r.abs_deviation < tolerance)) names.insert(r.family_name());
  return {names.begin(), names.end()};
}

std::string grid_to_csv(const std::vector<GridRow>& rows) {
  std::string out = "p1,p2,kind_pair,initial,parity,trips,closed_form,oracle,abs_deviation\n";
  for (const auto& r : rows) {
    out += format_double(r.p1) + ',' + format_double(r.p2) + ',' + to_string(std::pair{r.first, r.second}) + ',' +
           std::string(to_string(r.initial)) + ',' + std::to_string(parity(r.initial)) + ',' +
           std::string(to_string(r.trips)) + ',' + format_double(r.closed_form) + ',' + format_double(r.oracle) +
           ',' + format_double(r.abs_deviation) + '\n';
  }
  return out;
}

std::vector<GridRow> grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "p1,p2,kind_pair,initial,parity,trips,closed_form,oracle,abs_deviation") {
    throw std::invalid_argument("grid file: missing or unexpected header");
  }
  std::vector<GridRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    try {
      if (f.size() != 9) throw std::invalid_argument("expected 9 fields");
      GridRow r;
      r.p1 = parse_double(f[0]);
      r.p2 = parse_double(f[1]);
      std::tie(r.first, r.second) = kind_pair_from_string(f[2]);
      r.initial = bell_state_from_string(f[3]);
      if (parse_unsigned(f[4], "parity") != static_cast<std::uint64_t>(parity(r.initial))) {
        throw std::invalid_argument("parity does not match the Bell state");
      }
      r.trips = trips_from_string(f[5]);
      r.closed_form = parse_double(f[6]);
      r.oracle = parse_double(f[7]);
      r.abs_deviation = parse_double(f[8]);
      rows.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("grid file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "protocol") {
    c.protocol = protocol_from_string(value);
  } else if (key == "n") {
    c.n_list.clear();
    for (auto part : split(value, ',')) c.n_list.push_back(parse_unsigned(trim(part), "n"));
    if (c.n_list.empty() || std::find(c.n_list.begin(), c.n_list.end(), 0u) != c.n_list.end()) {
      throw std::invalid_argument("n must be at least 1");
    }
    c.n = static_cast<std::size_t>(c.n_list.front());
  } else if (key == "seed") {
    c.seed = parse_unsigned(value, "seed");
  } else if (key == "ma") {
    c.ma = std::string(value);
  } else if (key == "mb") {
    c.mb = std::string(value);
  } else if (key == "noise-a") {
    c.noise_a = arm_noise_from_string(value);
  } else if (key == "noise-b") {
    c.noise_b = arm_noise_from_string(value);
  } else if (key == "trips") {
    if (value == "both") {
      c.trips.reset();
    } else {
      c.trips = trips_from_string(value);
    }
  } else if (key == "attack") {
    c.attack = attack_from_string(value);
  } else if (key == "tolerance") {
    c.tolerance = parse_double(value);
    if (!(c.tolerance >= 0.0 && c.tolerance <= 1.0)) throw std::invalid_argument("tolerance must lie in [0, 1]");
  } else if (key == "check-fraction") {
    c.check_fraction = parse_double(value);
    if (!(c.check_fraction >= 0.0 && c.check_fraction <= 0.5)) {
      throw std::invalid_argument("check-fraction must lie in [0, 0.5]");
    }
  } else if (key == "trials") {
    c.trials = static_cast<std::size_t>(parse_unsigned(value, "trials"));
    if (c.trials == 0) throw std::invalid_argument("trials must be at least 1");
  } else if (key == "step") {
    c.step = parse_double(value);
    probability_grid(c.step);  // validates
  } else if (key == "kinds") {
    c.kinds.clear();
    for (auto part : split(value, ',')) c.kinds.push_back(kind_pair_from_string(trim(part)));
  } else if (key == "edition") {
    c.edition = formula_edition_from_string(value);
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(parse_unsigned(value, "threads"));
    if (c.threads == 0) throw std::invalid_argument("threads must be at least 1");
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "format") {
    if (value == "csv") {
      c.format = OutputFormat::Csv;
    } else if (value == "log") {
      c.format = OutputFormat::Log;
    } else {
      throw std::invalid_argument("format must be csv or log");
    }
  } else {
    throw std::invalid_argument("unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value");
      apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::exception& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace qpc
