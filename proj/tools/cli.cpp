#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "tcpp/error.hpp"
#include "tcpp/rng.hpp"
#include "tcpp/samplers.hpp"
#include "tcpp/serialize.hpp"
#include "tcpp/spec.hpp"
#include "tcpp/timechange.hpp"
#include "tcpp/verify.hpp"

namespace tcpp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240101;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// --spec takes inline JSON or a path to a JSON file.
SubordinatorSpec load_spec(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return spec_from_json(arg);
  return spec_from_json(read_file(arg));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TCPP_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("TCPP_SEED is not an unsigned integer: '") + env + "'");
  }
  return kDefaultSeed;
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct PmfArgs {
  std::string spec;
  double lambda = 1.0;
  double t = 1.0;
  std::string method = "auto";
  std::optional<int> kmax;
  std::size_t count = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
};

PmfTable bessel_table(const SubordinatorSpec& spec, const PmfArgs& a, const PmfOptions& opts) {
  const auto* ig = spec.get_if<InverseGaussian>();
  if (!ig) {
    throw CapabilityError("method bessel needs an IG clock; use --method quadrature or mc");
  }
  if (!(ig->gamma > 0.0)) {
    throw CapabilityError(
        "method bessel needs gamma > 0 (the closed form degenerates at gamma = 0); use "
        "--method quadrature");
  }
  return pmf_table_bessel(ig->delta, ig->gamma, a.lambda, a.t, a.kmax, opts);
}

int cmd_pmf(const PmfArgs& a, std::ostream& out, std::ostream& err) {
  const SubordinatorSpec spec = load_spec(a.spec);
  const PmfOptions opts;
  PmfTable table = [&] {
    if (a.method == "bessel") return bessel_table(spec, a, opts);
    if (a.method == "quadrature") return pmf_table_quadrature(spec, a.lambda, a.t, a.kmax, opts);
    SamplerOptions sampler;
    sampler.jobs = a.jobs;
    if (a.method == "mc") {
      return pmf_monte_carlo(a.kmax, a.t, a.lambda, spec, a.count, resolve_seed(a.seed), sampler,
                             opts);
    }
    const auto* ig = spec.get_if<InverseGaussian>();
    if (ig && ig->gamma > 0.0) return bessel_table(spec, a, opts);
    try {
      return pmf_table_quadrature(spec, a.lambda, a.t, a.kmax, opts);
    } catch (const CapabilityError& e) {
      err << "quadrature unavailable (" << e.what() << "); falling back to Monte Carlo\n";
      return pmf_monte_carlo(a.kmax, a.t, a.lambda, spec, a.count, resolve_seed(a.seed), sampler,
                             opts);
    }
  }();
  if (a.out.empty()) {
    io::write_pmf_csv(out, table);
  } else if (ends_with(a.out, ".json")) {
    write_text(a.out, io::pmf_json(table, opts) + "\n");
  } else {
    std::ostringstream csv;
    io::write_pmf_csv(csv, table);
    write_text(a.out, csv.str());
  }
  return kOk;
}

struct SimulateArgs {
  std::string spec;
  std::optional<double> lambda;
  double t = 1.0;
  int steps = 100;
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const SubordinatorSpec spec = load_spec(a.spec);
  if (!(a.t > 0.0)) throw InputError("simulate: --t must be positive");
  if (a.steps < 1) throw InputError("simulate: --steps must be at least 1");
  if (a.count < 1) throw InputError("simulate: --count must be at least 1");
  if (a.lambda && !(*a.lambda > 0.0)) throw InputError("simulate: --lambda must be positive");
  const std::uint64_t seed = resolve_seed(a.seed);
  std::vector<double> times(a.steps + 1);
  for (int i = 0; i <= a.steps; ++i) times[i] = a.t * i / a.steps;

  std::ostringstream csv;
  csv << "path";
  for (double t : times) csv << ',' << io::format_double(t);
  csv << '\n';
  for (std::size_t p = 0; p < a.count; ++p) {
    Rng rng = make_stream(seed, p);
    const std::vector<double> clock = sample_path(spec, times, rng);
    csv << p;
    if (a.lambda) {
      long long n = 0;
      double prev = 0.0;
      for (double x : clock) {
        const double mean = *a.lambda * std::max(0.0, x - prev);
        if (mean > 0.0) n += std::poisson_distribution<long long>(mean)(rng);
        prev = std::max(prev, x);
        csv << ',' << n;
      }
    } else {
      for (double x : clock) csv << ',' << io::format_double(x);
    }
    csv << '\n';
  }
  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_text(a.out, csv.str());
  }
  return kOk;
}

struct VerifyArgs {
  std::string config;
  std::string out_dir;
  int jobs = 1;
};

std::string report_file_name(std::size_t index, const std::string& variant) {
  std::string name;
  for (char c : variant) {
    name += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_';
  }
  while (!name.empty() && name.back() == '_') name.pop_back();
  std::ostringstream s;
  s << std::setw(2) << std::setfill('0') << index << '_' << name << ".json";
  return s.str();
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const io::Campaign campaign = io::parse_campaign(read_file(a.config));
  const std::string dir = !a.out_dir.empty() ? a.out_dir
                          : !campaign.out_dir.empty() ? campaign.out_dir
                                                      : std::string("verify_out");
  fs::create_directories(dir);
  const auto& reqs = campaign.requests;
  std::vector<std::optional<verify::ResidualReport>> reports(reqs.size());
  std::vector<std::string> failures(reqs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < reqs.size(); i = next++) {
      try {
        verify::ResidualReport r =
            verify::check_equation(reqs[i].equation_id, reqs[i].params, reqs[i].grid,
                                   reqs[i].k_range);
        write_text((fs::path(dir) / report_file_name(i, r.variant)).string(),
                   io::report_json(r) + "\n");
        reports[i] = std::move(r);
      } catch (const std::exception& e) {
        failures[i] = e.what();
        std::lock_guard<std::mutex> lock(log_mutex);
        err << "request " << i << " (" << reqs[i].equation_id << ") failed: " << e.what() << '\n';
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(a.jobs, static_cast<int>(reqs.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<verify::ResidualReport> done;
  bool all_pass = true;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (reports[i]) {
      all_pass = all_pass && reports[i]->pass;
      done.push_back(*reports[i]);
    } else {
      all_pass = false;
    }
  }
  std::ostringstream summary;
  io::write_summary_csv(summary, done);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (!reports[i]) summary << reqs[i].equation_id << ",,,error\n";
  }
  write_text((fs::path(dir) / "summary.csv").string(), summary.str());
  out << summary.str();
  return all_pass ? kOk : kVerificationFailure;
}

struct MomentsArgs {
  std::string spec;
  double lambda = 1.0;
  double t = 1.0;
  std::optional<double> delta;
  std::optional<double> gamma;
};

int cmd_moments(const MomentsArgs& a, std::ostream& out) {
  double delta = 0.0, gamma = 0.0;
  if (!a.spec.empty()) {
    const SubordinatorSpec spec = load_spec(a.spec);
    const auto* ig = spec.get_if<InverseGaussian>();
    if (!ig) throw CapabilityError("moments: closed-form moments exist for the IG clock only");
    delta = ig->delta;
    gamma = ig->gamma;
  }
  if (a.delta) delta = *a.delta;
  if (a.gamma) gamma = *a.gamma;
  if (!(delta > 0.0)) throw InputError("moments: delta must be positive");
  if (!(gamma > 0.0)) {
    throw InputError("moments: gamma must be positive (the mean is infinite at gamma = 0)");
  }
  if (!(a.lambda > 0.0) || !(a.t > 0.0)) throw InputError("moments: lambda and t must be positive");
  const Moments m = moments_ig(a.t, a.lambda, delta, gamma);
  // The variance weights the truncated tail by k^2, so sum much further out.
  PmfOptions opts;
  opts.tail_tol = 1e-13;
  const PmfTable table = pmf_table_bessel(delta, gamma, a.lambda, a.t, std::nullopt, opts);
  const Moments s = table_moments(table);
  const double check = std::max(std::abs(m.mean - s.mean), std::abs(m.variance - s.variance));
  json j{{"mean", m.mean},        {"variance", m.variance}, {"pmf_mean", s.mean},
         {"pmf_variance", s.variance}, {"pmf_check", check},     {"pmf_kmax", table.kmax},
         {"pmf_tail", table.tail_bound}};
  out << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson processes time-changed by subordinators and their inverses", "tcpp"};
  app.require_subcommand(1);

  PmfArgs pmf;
  auto* c_pmf = app.add_subcommand("pmf", "pmf table of N(X(t))");
  c_pmf->add_option("--spec", pmf.spec, "clock spec: inline JSON or a path")->required();
  c_pmf->add_option("--lambda", pmf.lambda, "Poisson rate")->required();
  c_pmf->add_option("--t", pmf.t, "time")->required();
  c_pmf->add_option("--method", pmf.method, "auto, bessel, quadrature or mc")
      ->check(CLI::IsMember({"auto", "bessel", "quadrature", "mc"}));
  c_pmf->add_option("--kmax", pmf.kmax, "largest count (default: automatic)");
  c_pmf->add_option("--count", pmf.count, "Monte Carlo draws");
  c_pmf->add_option("--seed", pmf.seed, "seed (default: TCPP_SEED, then a fixed value)");
  c_pmf->add_option("--out", pmf.out, "output path (.json: table with metadata; else CSV)");
  c_pmf->add_option("--jobs", pmf.jobs, "sampling threads");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "sample clock paths or count paths");
  c_sim->add_option("--spec", sim.spec, "clock spec: inline JSON or a path")->required();
  c_sim->add_option("--t", sim.t, "horizon")->required();
  c_sim->add_option("--steps", sim.steps, "grid steps on [0, t]");
  c_sim->add_option("--count", sim.count, "number of paths");
  c_sim->add_option("--lambda", sim.lambda, "if given, paths of N(X(t)) with this rate");
  c_sim->add_option("--seed", sim.seed, "seed (default: TCPP_SEED, then a fixed value)");
  c_sim->add_option("--out", sim.out, "CSV output path");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "run a verification campaign");
  c_ver->add_option("--config", ver.config, "campaign JSON")->required();
  c_ver->add_option("--out", ver.out_dir, "output directory for reports and summary.csv");
  c_ver->add_option("--jobs", ver.jobs, "concurrent requests");

  MomentsArgs mom;
  auto* c_mom = app.add_subcommand("moments", "closed-form mean and variance for the IG clock");
  c_mom->add_option("--spec", mom.spec, "IG clock spec: inline JSON or a path");
  c_mom->add_option("--lambda", mom.lambda, "Poisson rate")->required();
  c_mom->add_option("--t", mom.t, "time")->required();
  c_mom->add_option("--delta", mom.delta, "IG delta (overrides the spec)");
  c_mom->add_option("--gamma", mom.gamma, "IG gamma (overrides the spec)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "tcpp: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*c_pmf) return cmd_pmf(pmf, out, err);
    if (*c_sim) return cmd_simulate(sim, out);
    if (*c_ver) return cmd_verify(ver, out, err);
    if (*c_mom) return cmd_moments(mom, out);
  } catch (const CapabilityError& e) {
    err << "tcpp: " << e.what() << '\n';
    return kCapabilityError;
  } catch (const InputError& e) {
    err << "tcpp: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "tcpp: " << e.what() << '\n';
    return kInputError;
  } catch (const GridError& e) {
    err << "tcpp: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "tcpp: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kInputError;
}

}  // namespace tcpp::cli
