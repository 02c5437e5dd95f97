#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "subring/cache.hpp"
#include "subring/campaign.hpp"

namespace subring {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("subring_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove(p);
  return p;
}

TEST(IntRange, Parse) {
  EXPECT_EQ(IntRange::parse("3").values(), (std::vector<Int>{3}));
  EXPECT_EQ(IntRange::parse("2..5").values(), (std::vector<Int>{2, 3, 4, 5}));
  EXPECT_THROW(IntRange::parse("5..2"), UsageError);
  EXPECT_THROW(IntRange::parse("x"), UsageError);
  EXPECT_THROW(IntRange::parse("1..2x"), UsageError);
}

TEST(Format, ParseRejectsUnknown) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::csv);
  EXPECT_THROW(parse_format("xml"), UsageError);
  EXPECT_THROW(parse_method("guess"), UsageError);
}

TEST(CsvField, Quoting) {
  EXPECT_EQ(detail::csv_field("plain"), "plain");
  EXPECT_EQ(detail::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(detail::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(RunCount, TableCsvJson) {
  RunContext ctx;
  std::ostringstream table;
  EXPECT_EQ(run_count({2}, {0}, IntRange::parse("2"), Method::oracle, ctx, table), kExitOk);
  EXPECT_NE(table.str().find("  3"), std::string::npos) << table.str();

  ctx.format = OutputFormat::csv;
  std::ostringstream csv;
  run_count({2}, {0}, IntRange::parse("1..2"), Method::oracle, ctx, csv);
  EXPECT_EQ(csv.str(), "n,k,r,count,method\r\n2,0,1,1,oracle\r\n2,0,2,3,oracle\r\n");

  ctx.format = OutputFormat::json;
  std::ostringstream json;
  run_count({3}, {0}, IntRange::parse("4"), Method::unital, ctx, json);
  EXPECT_EQ(json.str(), R"({"n":3,"k":0,"r":4,"count":4,"method":"unital","version":"1.0.0"})"
                        "\n");
}

TEST(RunCount, BudgetExhaustionMarksIncomplete) {
  RunContext ctx;
  ctx.format = OutputFormat::csv;
  ctx.opts.budget.max_steps = 5;
  std::ostringstream out;
  EXPECT_EQ(run_count({3}, {0}, IntRange::parse("8"), Method::oracle, ctx, out), kExitIncomplete);
  EXPECT_NE(out.str().find("incomplete"), std::string::npos);
}

TEST(RunCountCorank, FormulaAndOracle) {
  RunContext ctx;
  ctx.format = OutputFormat::csv;
  std::ostringstream f, o;
  run_count_corank({4}, {2}, IntRange::parse("2"), Method::formula, ctx, f);
  EXPECT_EQ(f.str(), "ambient,corank,torsion,count,method\r\n4,2,2,75,formula\r\n");
  run_count_corank({4}, {2}, IntRange::parse("2"), Method::oracle, ctx, o);
  EXPECT_EQ(o.str(), "ambient,corank,torsion,count,method\r\n4,2,2,75,oracle\r\n");
  std::ostringstream bad;
  EXPECT_THROW(run_count_corank({2}, {3}, IntRange::parse("1"), Method::formula, ctx, bad), UsageError);
}

TEST(RunVerify, PassesAndSummarizes) {
  RunContext ctx;
  std::ostringstream out, err;
  VerifySummary sum;
  EXPECT_EQ(run_verify({1}, {1, 2}, IntRange::parse("1..3"), ctx, out, err, &sum), kExitOk);
  EXPECT_EQ(sum.cells, 6u);
  EXPECT_EQ(sum.passed, 6u);
  EXPECT_NE(out.str().find("# cells 6, pass 6, fail 0, incomplete 0"), std::string::npos);
  EXPECT_NE(err.str().find("# wall time"), std::string::npos);
}

TEST(RunVerify, JsonStdoutHasNoTiming) {
  RunContext ctx;
  ctx.format = OutputFormat::json;
  std::ostringstream out, err;
  run_verify({1}, {1}, IntRange::parse("2"), ctx, out, err);
  EXPECT_EQ(out.str().find("wall"), std::string::npos);
  EXPECT_EQ(out.str().find("#"), std::string::npos);
}

TEST(RunPartitions, ListsMaps) {
  RunContext ctx;
  ctx.format = OutputFormat::csv;
  std::ostringstream out;
  run_partitions(3, 2, ctx, out);
  EXPECT_EQ(out.str(),
            "index,partition,map\r\n"
            "0,\"{{0,1},{2}}\",\"0,a\"\r\n"
            "1,\"{{0,2},{1}}\",\"a,0\"\r\n"
            "2,\"{{0},{1,2}}\",\"a,a\"\r\n");
}

TEST(RunSeries, UnitalRankTwoIsAllOnes) {
  RunContext ctx;
  ctx.format = OutputFormat::csv;
  std::ostringstream out;
  EXPECT_EQ(run_series(2, 5, SeriesKind::unital, ctx, out), kExitOk);
  EXPECT_EQ(out.str(), "r,f,N\r\n1,1,1\r\n2,1,2\r\n3,1,3\r\n4,1,4\r\n5,1,5\r\n");
}

TEST(RunSeries, UnitalRankOne) {
  RunContext ctx;
  ctx.format = OutputFormat::csv;
  std::ostringstream out;
  run_series(1, 4, SeriesKind::unital, ctx, out);
  EXPECT_EQ(out.str(), "r,f,N\r\n1,1,1\r\n2,0,1\r\n3,0,1\r\n4,0,1\r\n");
}

TEST(RunSeries, TruncatesOnBudget) {
  RunContext ctx;
  ctx.opts.budget.max_steps = 200;
  std::ostringstream out;
  EXPECT_EQ(run_series(3, 40, SeriesKind::full, ctx, out), kExitIncomplete);
  EXPECT_NE(out.str().find("# truncated at r="), std::string::npos);
}

TEST(Cache, ColdThenWarmGivesSameOutput) {
  const fs::path path = temp_file("cache.jsonl");
  std::string cold, warm;
  {
    ResultCache cache(path);
    EXPECT_EQ(cache.size(), 0u);
    RunContext ctx;
    ctx.cache = &cache;
    std::ostringstream out;
    run_count({2, 3}, {0}, IntRange::parse("1..4"), Method::oracle, ctx, out);
    cold = out.str();
    EXPECT_EQ(cache.size(), 8u);
  }
  {
    ResultCache cache(path);
    EXPECT_EQ(cache.size(), 8u);
    const auto hit = cache.lookup(3, 0, 4, Method::oracle);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->record.count, 13);
    EXPECT_FALSE(hit->created_at.empty());
    RunContext ctx;
    ctx.cache = &cache;
    ctx.opts.budget.max_steps = 1;  // a miss would exhaust this
    std::ostringstream out;
    EXPECT_EQ(run_count({2, 3}, {0}, IntRange::parse("1..4"), Method::oracle, ctx, out), kExitOk);
    warm = out.str();
  }
  EXPECT_EQ(cold, warm);
  fs::remove(path);
}

TEST(Cache, OtherVersionMisses) {
  const fs::path path = temp_file("versions.jsonl");
  {
    ResultCache cache(path, "0.9.0");
    cache.insert({2, 0, 2, 3, Method::oracle});
    cache.flush();
  }
  ResultCache current(path);
  EXPECT_FALSE(current.lookup(2, 0, 2, Method::oracle).has_value());
  current.insert({2, 0, 2, 3, Method::oracle});
  current.flush();
  ResultCache reread(path);
  EXPECT_TRUE(reread.lookup(2, 0, 2, Method::oracle).has_value());
  std::ifstream in(path);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 2u);
  fs::remove(path);
}

TEST(Cache, KeysAreImmutableAndCorruptLinesIgnored) {
  const fs::path path = temp_file("immutable.jsonl");
  {
    std::ofstream out(path);
    out << "{not json\n";
    out << R"({"n":1,"k":1,"r":1,"count":3,"method":"formula","version":"1.0.0"})" << '\n';
  }
  ResultCache cache(path);
  EXPECT_EQ(cache.size(), 1u);
  cache.insert({1, 1, 1, 99, Method::formula});
  EXPECT_EQ(cache.lookup(1, 1, 1, Method::formula)->record.count, 3);
  fs::remove(path);
}

TEST(Records, RejectInconsistentJson) {
  EXPECT_THROW(count_record_from_json(nlohmann::json::parse(
                   R"({"n":1,"k":0,"r":1,"count":1,"method":"formula","version":"1.0.0"})")),
               UsageError);
  EXPECT_THROW(count_record_from_json(nlohmann::json::parse(
                   R"({"n":1,"k":0,"r":0,"count":1,"method":"oracle","version":"1.0.0"})")),
               UsageError);
}

}  // namespace
}  // namespace subring
