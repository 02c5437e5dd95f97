#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "subring/cache.hpp"
#include "subring/enumeration.hpp"
#include "subring/partition.hpp"
#include "subring/records.hpp"

namespace subring {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitIncomplete = 2;

/// Inclusive integer range parsed from "a..b" or "a".
struct IntRange {
  Int first = 1;
  Int last = 1;

  static IntRange parse(std::string_view text) {
    auto to_int = [&](std::string_view s) -> Int {
      std::size_t used = 0;
      Int v = 0;
      try {
        v = std::stoll(std::string(s), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) throw UsageError("bad range '" + std::string(text) + "'");
      return v;
    };
    IntRange out;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
      out.first = to_int(text.substr(0, dots));
      out.last = to_int(text.substr(dots + 2));
    } else {
      out.first = out.last = to_int(text);
    }
    if (out.last < out.first) throw UsageError("empty range '" + std::string(text) + "'");
    return out;
  }

  std::vector<Int> values() const {
    std::vector<Int> v;
    for (Int x = first; x <= last; ++x) v.push_back(x);
    return v;
  }
};

enum class OutputFormat { table, csv, json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw UsageError("unknown format '" + std::string(s) + "'");
}

struct RunContext {
  EnumerationOptions opts{};
  Int bound_multiplier = 1;
  OutputFormat format = OutputFormat::table;
  ResultCache* cache = nullptr;
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Header + rows rendered as an aligned table, RFC-4180 CSV, or JSON lines
/// (one object per row, keyed by header).
class TableWriter {
 public:
  TableWriter(std::ostream& out, OutputFormat format, std::vector<std::string> header,
              std::vector<std::size_t> widths)
      : out_(out), format_(format), header_(std::move(header)), widths_(std::move(widths)) {}

  void begin() {
    if (format_ == OutputFormat::json) return;
    write_line(header_);
  }

  // `json` overrides the default stringly object in JSON mode.
  void row(const std::vector<std::string>& cells, const nlohmann::ordered_json* json = nullptr) {
    if (format_ == OutputFormat::json) {
      if (json) {
        out_ << json->dump() << '\n';
      } else {
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < header_.size(); ++i) j[header_[i]] = cells[i];
        out_ << j.dump() << '\n';
      }
    } else {
      write_line(cells);
    }
    out_.flush();
  }

 private:
  void write_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (format_ == OutputFormat::csv) {
        out_ << (i ? "," : "") << csv_field(cells[i]);
      } else {
        if (i) out_ << "  ";
        const bool last = i + 1 == cells.size();
        out_ << std::setw(last ? 0 : static_cast<int>(widths_[i])) << cells[i];
      }
    }
    out_ << (format_ == OutputFormat::csv ? "\r\n" : "\n");
  }

  std::ostream& out_;
  OutputFormat format_;
  std::vector<std::string> header_;
  std::vector<std::size_t> widths_;
};

inline nlohmann::ordered_json incomplete_json(std::size_t n, std::size_t k, Int r, Method m) {
  return {{"n", n}, {"k", k}, {"r", r}, {"count", nullptr}, {"method", to_string(m)},
          {"status", "incomplete"}};
}

}  // namespace detail

/// One count cell: served from the cache when possible, else computed and
/// recorded. Throws BudgetExceeded when the search cannot finish.
inline CountRecord compute_count(std::size_t n, std::size_t k, Int r, Method method, const RunContext& ctx) {
  const bool cacheable = method != Method::oracle || k == 0 || ctx.bound_multiplier == 1;
  if (ctx.cache && cacheable)
    if (auto hit = ctx.cache->lookup(n, k, r, method)) return hit->record;
  CountRecord rec;
  rec.n = n;
  rec.k = k;
  rec.r = r;
  rec.method = method;
  switch (method) {
    case Method::unital:
      if (k != 0) throw UsageError("unital counts exist only for co-rank 0");
      rec.count = f_count(n, r, ctx.opts);
      break;
    case Method::formula:
      rec.count = phi_corank_formula(n, k, r, ctx.opts);
      break;
    case Method::oracle:
      rec.count = k == 0 ? phi(n, r, ctx.opts)
                         : static_cast<Int>(enumerate_corank_oracle(n + k, k, r, ctx.bound_multiplier, ctx.opts).size());
      break;
  }
  if (ctx.cache && cacheable) ctx.cache->insert(rec);
  return rec;
}

/// Prints one row per (n, k, r) cell. Cells that run out of budget are marked
/// incomplete and make the exit status nonzero.
inline int run_count(const std::vector<std::size_t>& ns, const std::vector<std::size_t>& ks,
                     const IntRange& rs, Method method, const RunContext& ctx, std::ostream& out) {
  detail::TableWriter w(out, ctx.format, {"n", "k", "r", "count", "method"}, {3, 3, 6, 12, 0});
  w.begin();
  bool incomplete = false;
  for (std::size_t n : ns)
    for (std::size_t k : ks)
      for (Int r : rs.values()) {
        try {
          const CountRecord rec = compute_count(n, k, r, method, ctx);
          const auto j = to_json(rec);
          w.row({std::to_string(n), std::to_string(k), std::to_string(r), std::to_string(rec.count),
                 std::string(to_string(method))},
                &j);
        } catch (const BudgetExceeded&) {
          incomplete = true;
          const auto j = detail::incomplete_json(n, k, r, method);
          w.row({std::to_string(n), std::to_string(k), std::to_string(r), "incomplete",
                 std::string(to_string(method))},
                &j);
        }
      }
  if (ctx.cache) ctx.cache->flush();
  return incomplete ? kExitIncomplete : kExitOk;
}

/// Co-rank counts keyed by (ambient, corank, torsion); method formula or
/// oracle.
inline int run_count_corank(const std::vector<std::size_t>& ambients, const std::vector<std::size_t>& coranks,
                            const IntRange& torsion, Method method, const RunContext& ctx, std::ostream& out) {
  if (method == Method::unital) throw UsageError("count-corank: method must be formula or oracle");
  const std::string method_name(to_string(method));
  detail::TableWriter w(out, ctx.format, {"ambient", "corank", "torsion", "count", "method"}, {7, 6, 7, 12, 0});
  w.begin();
  bool incomplete = false;
  for (std::size_t a : ambients)
    for (std::size_t k : coranks) {
      if (k > a) throw UsageError("count-corank: corank exceeds ambient dimension");
      for (Int r : torsion.values()) {
        nlohmann::ordered_json j{{"ambient", a}, {"corank", k}, {"torsion", r}};
        std::string shown;
        try {
          const CountRecord rec = compute_count(a - k, k, r, method, ctx);
          j["count"] = rec.count;
          shown = std::to_string(rec.count);
        } catch (const BudgetExceeded&) {
          incomplete = true;
          j["count"] = nullptr;
          j["status"] = "incomplete";
          shown = "incomplete";
        }
        j["method"] = method_name;
        w.row({std::to_string(a), std::to_string(k), std::to_string(r), shown, method_name}, &j);
      }
    }
  if (ctx.cache) ctx.cache->flush();
  return incomplete ? kExitIncomplete : kExitOk;
}

struct VerifySummary {
  std::size_t cells = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t incomplete = 0;
};

/// Streams one report per (n, k, r) cell. Exit status 0 iff every cell
/// passes; 1 on any failure (the first counterexample is printed in full);
/// 2 if a cell ran out of budget and nothing failed.
inline int run_verify(const std::vector<std::size_t>& ns, const std::vector<std::size_t>& ks, const IntRange& rs,
                      const RunContext& ctx, std::ostream& out, std::ostream& err,
                      VerifySummary* summary_out = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  detail::TableWriter w(out, ctx.format,
                        {"n", "k", "r", "bound", "oracle", "formula", "stirling", "phi", "witnesses", "status"},
                        {3, 3, 5, 5, 8, 8, 8, 6, 9, 0});
  w.begin();
  VerifySummary sum;
  std::optional<VerificationReport> first_failure;
  for (std::size_t n : ns)
    for (std::size_t k : ks)
      for (Int r : rs.values()) {
        ++sum.cells;
        try {
          const VerificationReport rep = verify_main_theorem(n, k, r, ctx.bound_multiplier, ctx.opts);
          if (ctx.cache) {
            if (ctx.bound_multiplier == 1 && k > 0) ctx.cache->insert({n, k, r, rep.oracle_count, Method::oracle});
            if (k > 0) ctx.cache->insert({n, k, r, rep.formula_count, Method::formula});
          }
          rep.pass ? ++sum.passed : ++sum.failed;
          if (!rep.pass && !first_failure) first_failure = rep;
          const auto j = to_json(rep);
          w.row({std::to_string(n), std::to_string(k), std::to_string(r), std::to_string(rep.bound_multiplier),
                 std::to_string(rep.oracle_count), std::to_string(rep.formula_count),
                 std::to_string(rep.stirling_factor), std::to_string(rep.phi_base),
                 std::to_string(rep.witnesses_checked), rep.pass ? "pass" : "FAIL"},
                &j);
        } catch (const BudgetExceeded&) {
          ++sum.incomplete;
          nlohmann::ordered_json j{{"n", n}, {"k", k}, {"r", r}, {"status", "incomplete"}};
          w.row({std::to_string(n), std::to_string(k), std::to_string(r), std::to_string(ctx.bound_multiplier),
                 "-", "-", "-", "-", "-", "incomplete"},
                &j);
        }
      }
  if (ctx.cache) ctx.cache->flush();

  std::ostream& footer = ctx.format == OutputFormat::table ? out : err;
  footer << "# cells " << sum.cells << ", pass " << sum.passed << ", fail " << sum.failed << ", incomplete "
         << sum.incomplete << '\n';
  if (first_failure) {
    footer << "# first failure at n=" << first_failure->n << " k=" << first_failure->k
           << " r=" << first_failure->r << ": " << first_failure->failure << '\n';
    if (first_failure->counterexample)
      footer << "# counterexample " << to_json(*first_failure->counterexample).dump() << '\n';
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << "# wall time " << std::fixed << std::setprecision(3) << elapsed.count() << " s\n";
  if (summary_out) *summary_out = sum;
  if (sum.failed) return kExitVerifyFailed;
  return sum.incomplete ? kExitIncomplete : kExitOk;
}

/// Lists every partition of {0..ground-1} into `blocks` blocks together with
/// its ordered acceptable map Z^(blocks-1) -> Z^(ground-1).
inline int run_partitions(std::size_t ground, std::size_t blocks, const RunContext& ctx, std::ostream& out) {
  detail::TableWriter w(out, ctx.format, {"index", "partition", "map"}, {5, 24, 0});
  w.begin();
  const auto parts = enumerate_partitions(ground, blocks);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::string map;
    if (ground >= 1 && blocks >= 1) map = partition_to_map(parts[i], blocks - 1).to_string();
    nlohmann::ordered_json j{{"index", i}, {"partition", to_json(parts[i])}, {"map", map}};
    w.row({std::to_string(i), parts[i].to_string(), map}, &j);
  }
  return kExitOk;
}

enum class SeriesKind { unital, full };

/// Coefficients f_n(1..r_max) (or phi_n) with the running sum N_n(B). On
/// budget exhaustion writes a truncation marker and returns 2.
inline int run_series(std::size_t n, Int r_max, SeriesKind kind, const RunContext& ctx, std::ostream& out) {
  const std::string col = kind == SeriesKind::unital ? "f" : "phi";
  detail::TableWriter w(out, ctx.format, {"r", col, "N"}, {6, 10, 0});
  w.begin();
  Int running = 0;
  const Method method = kind == SeriesKind::unital ? Method::unital : Method::oracle;
  for (Int r = 1; r <= r_max; ++r) {
    CountRecord rec;
    try {
      rec = compute_count(n, 0, r, method, ctx);
    } catch (const BudgetExceeded&) {
      if (ctx.cache) ctx.cache->flush();
      if (ctx.format == OutputFormat::json)
        out << nlohmann::ordered_json{{"truncated_at", r}}.dump() << '\n';
      else
        out << "# truncated at r=" << r << ": search budget exhausted\n";
      return kExitIncomplete;
    }
    running = checked::add(running, rec.count);
    nlohmann::ordered_json j{{"r", r}, {col, rec.count}, {"N", running}};
    w.row({std::to_string(r), std::to_string(rec.count), std::to_string(running)}, &j);
  }
  if (ctx.cache) ctx.cache->flush();
  return kExitOk;
}

}  // namespace subring
