// Command-line front end: counts, co-rank counts, verification campaigns,
// partition listings and coefficient series.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "subring/cache.hpp"
#include "subring/campaign.hpp"

namespace {

std::vector<std::size_t> to_sizes(const subring::IntRange& range) {
  if (range.first < 0) throw subring::UsageError("dimension ranges must be nonnegative");
  std::vector<std::size_t> out;
  for (auto v : range.values()) out.push_back(static_cast<std::size_t>(v));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Count multiplicative sublattices of Z^n and check the co-rank Stirling identity"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string cache_path;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "table";
  subring::Int bound_multiplier = 1;
  std::uint64_t budget = 500'000'000;
  double time_limit = 0;
  app.add_option("--cache", cache_path, "JSON-lines result cache");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--bound-multiplier", bound_multiplier, "co-rank oracle entry bound, in units of r")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "max search steps per enumeration (0 = unlimited)");
  app.add_option("--time-limit", time_limit, "wall-time ceiling per enumeration in seconds (0 = none)");

  std::string n_text = "1", r_text = "1";
  std::string method_text = "oracle";

  auto* count = app.add_subcommand("count", "phi_n(r) (method oracle) or f_n(r) (method unital)");
  count->add_option("--n", n_text, "rank or range a..b")->required();
  count->add_option("--r", r_text, "index or range a..b")->required();
  count->add_option("--method", method_text, "oracle or unital")->check(CLI::IsMember({"oracle", "unital"}));

  std::string ambient_text = "1", corank_text = "0", torsion_text = "1";
  std::string corank_method = "formula";
  auto* count_corank = app.add_subcommand("count-corank", "phi_{ambient,corank}(torsion)");
  count_corank->add_option("--ambient", ambient_text, "ambient dimension or range")->required();
  count_corank->add_option("--corank", corank_text, "co-rank or range")->required();
  count_corank->add_option("--torsion", torsion_text, "torsion size or range")->required();
  count_corank->add_option("--method", corank_method, "formula or oracle")
      ->check(CLI::IsMember({"formula", "oracle"}));

  std::string vn = "1", vk = "1", vr = "1";
  auto* verify = app.add_subcommand("verify", "check oracle counts against the Stirling formula");
  verify->add_option("--n", vn, "base rank or range")->required();
  verify->add_option("--k", vk, "co-rank or range")->required();
  verify->add_option("--r", vr, "torsion size or range")->required();

  std::size_t ground = 1, blocks = 1;
  auto* partitions = app.add_subcommand("partitions", "list set partitions and their ordered maps");
  partitions->add_option("--ground", ground, "ground set size (elements 0..ground-1)")->required();
  partitions->add_option("--blocks", blocks, "number of blocks")->required();

  std::size_t series_n = 1;
  subring::Int r_max = 1;
  std::string kind = "f";
  std::string output_path;
  std::size_t series_max_n = 4;
  auto* series = app.add_subcommand("series", "coefficients f_n(r) or phi_n(r) with partial sums");
  series->add_option("--n", series_n, "rank")->required();
  series->add_option("--r-max", r_max, "largest r")->required()->check(CLI::PositiveNumber);
  series->add_option("--kind", kind, "f or phi")->check(CLI::IsMember({"f", "phi"}));
  series->add_option("--output", output_path, "write to file instead of stdout");
  series->add_option("--max-n", series_max_n, "largest rank accepted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : subring::kExitIncomplete;
  }

  try {
    subring::RunContext ctx;
    ctx.opts.jobs = jobs;
    ctx.opts.budget = {budget, time_limit};
    ctx.bound_multiplier = bound_multiplier;
    ctx.format = subring::parse_format(format);
    std::unique_ptr<subring::ResultCache> cache;
    if (!cache_path.empty()) {
      cache = std::make_unique<subring::ResultCache>(cache_path);
      ctx.cache = cache.get();
    }

    if (*count) {
      return subring::run_count(to_sizes(subring::IntRange::parse(n_text)), {0}, subring::IntRange::parse(r_text),
                                subring::parse_method(method_text), ctx, std::cout);
    }
    if (*count_corank) {
      return subring::run_count_corank(to_sizes(subring::IntRange::parse(ambient_text)),
                                       to_sizes(subring::IntRange::parse(corank_text)),
                                       subring::IntRange::parse(torsion_text), subring::parse_method(corank_method),
                                       ctx, std::cout);
    }
    if (*verify) {
      return subring::run_verify(to_sizes(subring::IntRange::parse(vn)), to_sizes(subring::IntRange::parse(vk)),
                                 subring::IntRange::parse(vr), ctx, std::cout, std::cerr);
    }
    if (*partitions) return subring::run_partitions(ground, blocks, ctx, std::cout);
    if (*series) {
      const auto sk = kind == "f" ? subring::SeriesKind::unital : subring::SeriesKind::full;
      if (series_n > series_max_n) throw subring::UsageError("series: n exceeds --max-n");
      if (output_path.empty()) return subring::run_series(series_n, r_max, sk, ctx, std::cout);
      std::ofstream file(output_path, std::ios::trunc);
      if (!file) throw subring::UsageError("cannot open " + output_path);
      return subring::run_series(series_n, r_max, sk, ctx, file);
    }
  } catch (const subring::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return subring::kExitIncomplete;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return subring::kExitIncomplete;
  }
  return subring::kExitOk;
}
