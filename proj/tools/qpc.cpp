// qpc: run the comparison protocols, sweep fidelity grids, verify the closed
// forms, run attack campaigns and print efficiency tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qpc/adversary.hpp"
#include "qpc/analysis.hpp"
#include "qpc/efficiency.hpp"
#include "qpc/format.hpp"
#include "qpc/osb.hpp"
#include "qpc/sqpc.hpp"

namespace {

using namespace qpc;

enum Exit { kComplete = 0, kUsage = 1, kAborted = 2, kFormulaFailure = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values as typed; applied over the config file so flags win.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    options[key] = app->add_option("--" + key, values[key], help);
  }
};

void add_flags(CLI::App* app, FlagSet& f, const std::vector<std::string>& keys) {
  static const std::map<std::string, std::string> help = {
      {"protocol", "osb or sqpc"},
      {"n", "message length N (efficiency: comma-separated list)"},
      {"seed", "root seed"},
      {"ma", "Alice's message, hex, most significant bit first"},
      {"mb", "Bob's message, hex, most significant bit first"},
      {"noise-a", "noise on Alice's channel, kind:p (ad, bf, pf, dc)"},
      {"noise-b", "noise on Bob's channel, kind:p"},
      {"trips", "oneway, roundtrip or both"},
      {"attack", "name[@arm][:fraction]"},
      {"tolerance", "eavesdropping-check error threshold"},
      {"check-fraction", "fraction of the 2N OSB coordinates sacrificed in the correlation check"},
      {"trials", "number of seeded trials"},
      {"step", "grid step (must divide 1)"},
      {"kinds", "comma-separated kind pairs, e.g. bf-bf,ad-dc"},
      {"edition", "printed or kraus-consistent"},
      {"threads", "worker threads"},
      {"out", "output file (default: stdout)"},
      {"format", "csv or log"},
  };
  for (const auto& k : keys) f.add(app, k, help.at(k));
  app->add_option("--config", f.config_file, "key=value configuration file");
}

RunConfig resolve(const FlagSet& f) {
  RunConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw UsageError("cannot read config file '" + f.config_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(c, ss.str(), f.config_file);
  }
  for (const auto& [key, opt] : f.options) {
    if (opt->count() == 0) continue;
    try {
      apply_setting(c, key, f.values.at(key));
    } catch (const std::exception& e) {
      throw UsageError("--" + key + ": " + e.what());
    }
  }
  return c;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + c.out + "'");
  out << text;
}

ChannelNoise channel_noise(const RunConfig& c) { return {c.noise_a, c.noise_b}; }

BitString message(const std::optional<std::string>& hex, std::size_t n, Rng& rng) {
  if (!hex) return BitString::random(n, rng);
  try {
    return BitString::from_hex(*hex, n);
  } catch (const std::exception& e) {
    throw UsageError(std::string("message: ") + e.what());
  }
}

int cmd_run(const RunConfig& c) {
  RunContext ctx(c.seed);
  const BitString m_a = message(c.ma, c.n, ctx.stream(Stream::Harness));
  const BitString m_b = message(c.mb, c.n, ctx.stream(Stream::Harness));
  auto eve = make_attacker(c.attack, c.protocol);
  ComparisonOutcome outcome = Equal{};
  ProtocolTranscript transcript;
  if (c.protocol == Protocol::Osb) {
    osb::Options opt;
    opt.n = c.n;
    opt.gv_tolerance = c.tolerance;
    opt.check_fraction = c.check_fraction;
    opt.noise = channel_noise(c);
    auto r = osb::run(m_a, m_b, opt, ctx, eve.get());
    outcome = r.outcome;
    transcript = std::move(r.transcript);
  } else {
    sqpc::Options opt;
    opt.n = c.n;
    opt.case1_tolerance = c.tolerance;
    opt.noise = channel_noise(c);
    auto r = sqpc::run(m_a, m_b, opt, ctx, eve.get());
    outcome = r.outcome;
    transcript = std::move(r.transcript);
  }
  emit(c, c.format.value_or(OutputFormat::Log) == OutputFormat::Log ? transcript.to_jsonl() : transcript.to_csv());
  (c.out.empty() ? std::cerr : std::cout) << "verdict: " << outcome.summary() << "\n";
  return outcome.is_aborted() ? kAborted : kComplete;
}

int cmd_fidelity_grid(const RunConfig& c) {
  GridRequest req;
  req.step = c.step;
  if (c.trips) req.trips = {*c.trips};
  req.kind_pairs = c.kinds;
  req.edition = c.edition;
  const auto rows = fidelity_grid(req);
  if (c.format.value_or(OutputFormat::Csv) == OutputFormat::Csv) {
    emit(c, grid_to_csv(rows));
  } else {
    std::string out;
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["p1"] = r.p1;
      j["p2"] = r.p2;
      j["kind_pair"] = to_string(std::pair{r.first, r.second});
      j["initial"] = to_string(r.initial);
      j["parity"] = parity(r.initial);
      j["trips"] = to_string(r.trips);
      j["closed_form"] = r.closed_form;
      j["oracle"] = r.oracle;
      j["abs_deviation"] = r.abs_deviation;
      out += j.dump() + "\n";
    }
    emit(c, out);
  }
  const auto failing = failing_families(rows);
  for (const auto& name : failing) std::cerr << "formula mismatch: " << name << "\n";
  return failing.empty() ? kComplete : kFormulaFailure;
}

int cmd_verify(const RunConfig& c) {
  const FormulaReport report = verify_all_formulas(c.step, c.edition);
  std::string out = "family,points,max_deviation,status,worst\n";
  for (const auto& chk : report.checks) {
    std::string worst;
    if (!chk.passed()) {
      worst = to_string(std::pair{chk.worst_first, chk.worst_second}) + " " +
              std::string(to_string(chk.worst_state)) + " p1=" + format_double(chk.worst_p1) +
              " p2=" + format_double(chk.worst_p2);
    }
    out += chk.name() + "," + std::to_string(chk.points) + "," + format_double(chk.max_deviation) + "," +
           (chk.passed() ? "pass" : "FAIL") + "," + worst + "\n";
  }
  emit(c, out);
  for (const auto* f : report.failures()) std::cerr << "formula mismatch: " << f->name() << "\n";
  return report.passed() ? kComplete : kFormulaFailure;
}

int cmd_attack(const RunConfig& c) {
  CampaignConfig cc;
  cc.protocol = c.protocol;
  cc.n = c.n;
  cc.strategy = c.attack;
  cc.trials = c.trials;
  cc.seed = c.seed;
  cc.tolerance = c.tolerance;
  cc.check_fraction = c.check_fraction;
  cc.noise = channel_noise(c);
  if (c.ma) cc.m_a = BitString::from_hex(*c.ma, c.n);
  if (c.mb) cc.m_b = BitString::from_hex(*c.mb, c.n);
  cc.threads = c.threads;
  try {
    c.attack.validate(c.protocol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto stats = run_with_attack(cc);
  emit(c, c.format.value_or(OutputFormat::Csv) == OutputFormat::Log ? to_jsonl({stats}) : to_csv({stats}));
  return kComplete;
}

int cmd_efficiency(const RunConfig& c) {
  std::vector<std::uint64_t> ns = c.n_list;
  if (ns.empty()) ns = {1, 10, 1000, 1000000};
  if (c.format.value_or(OutputFormat::Csv) == OutputFormat::Csv) {
    emit(c, efficiency_table(ns));
    return kComplete;
  }
  std::string out;
  for (Protocol p : {Protocol::Osb, Protocol::Sqpc}) {
    for (auto n : ns) {
      const Efficiency e = efficiency(p, n);
      nlohmann::ordered_json j;
      j["protocol"] = to_string(p);
      j["n"] = n;
      j["c"] = e.ledger.c;
      j["q"] = e.ledger.q;
      j["b"] = e.ledger.b;
      j["eta"] = e.eta.to_string();
      j["eta_decimal"] = e.eta.to_double();
      nlohmann::ordered_json items = nlohmann::ordered_json::array();
      for (const auto& it : e.ledger.items) {
        items.push_back({{"item", it.name}, {"qubits", it.qubits}, {"bits", it.bits}, {"simulated", it.simulated}});
      }
      j["items"] = items;
      out += j.dump() + "\n";
    }
  }
  emit(c, out);
  return kComplete;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum private comparison simulator"};
  app.require_subcommand(1);

  const std::vector<std::string> all = {"protocol", "n", "seed", "ma", "mb", "noise-a", "noise-b", "trips",
                                        "attack", "tolerance", "check-fraction", "trials", "step", "kinds",
                                        "edition", "threads", "out", "format"};
  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&);
  };
  const Command commands[] = {
      {"run", "execute one protocol run and write its transcript", cmd_run},
      {"fidelity-grid", "closed-form vs exact fidelity over a p1 x p2 grid", cmd_fidelity_grid},
      {"attack", "seeded attack campaign", cmd_attack},
      {"efficiency", "qubit efficiency table", cmd_efficiency},
      {"verify-formulas", "check every closed form against exact evolution", cmd_verify},
  };
  std::vector<FlagSet> flags(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].name, commands[i].help));
    add_flags(subs.back(), flags[i], all);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kComplete : kUsage;
  }

  try {
    for (std::size_t i = 0; i < std::size(commands); ++i) {
      if (subs[i]->parsed()) return commands[i].fn(resolve(flags[i]));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
