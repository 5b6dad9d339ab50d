#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "record_gen.hpp"
#include "xlqe/commands.hpp"
#include "xlqe/embedding_io.hpp"
#include "xlqe/stats.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = XLQE_FIXTURE_DIR;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(XLQE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<xlqe::IdValue> scores_of(const std::vector<xlqe::SentencePairRecord>& records,
                                     const xlqe::ScoreConfig& cfg) {
  std::vector<xlqe::IdValue> out;
  for (const auto& r : records) out.emplace_back(r.id, xlqe::score_pair(r, cfg).final);
  return out;
}

}  // namespace

TEST_CASE("score command writes one row per record in input order") {
  const auto input = kFixtures / "small_5.jsonl";
  const auto output = testgen::temp_path("scores.tsv");
  xlqe::ScoreCommand cmd{input, output, {}, 3};
  xlqe::run_score(cmd);

  const auto rows = xlqe::read_score_file(output);
  const auto records = xlqe::read_records(input);
  REQUIRE(rows.size() == records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].first == records[i].id);
    CHECK(rows[i].second == doctest::Approx(xlqe::score_pair(records[i], {}).final).epsilon(5e-7));
  }
  CHECK(testgen::read_text(output).rfind("id\tscore\n", 0) == 0);
}

TEST_CASE("score command on an empty input writes only the header") {
  const auto input = testgen::temp_path("empty.jsonl");
  testgen::write_text(input, "");
  const auto output = testgen::temp_path("scores.tsv");
  xlqe::run_score({input, output, {}, 2});
  CHECK(testgen::read_text(output) == "id\tscore\n");
}

TEST_CASE("score command aborts on a bad record and leaves no output") {
  auto records = xlqe::read_records(kFixtures / "small_5.jsonl");
  records[3].alignment = "0-0 1-q";
  const auto input = testgen::temp_path("bad.jsonl");
  xlqe::write_records(records, input);
  const auto output = testgen::temp_path("scores.tsv");
  xlqe::ScoreConfig cfg;
  cfg.variant = xlqe::Variant::Align;
  // syntax is an invariant, so loading already fails and names the record
  CHECK_THROWS_WITH_AS(xlqe::run_score({input, output, cfg, 4}),
                       doctest::Contains(records[3].id.c_str()), xlqe::DataError);
  CHECK_FALSE(fs::exists(output));

  // scoring in memory reports the lowest failing record regardless of worker count
  records[1].alignment = "x";
  for (unsigned jobs : {1u, 2u, 8u}) {
    CHECK_THROWS_WITH_AS(xlqe::score_records(records, cfg, jobs),
                         doctest::Contains(("record \"" + records[1].id + "\"").c_str()), xlqe::DataError);
  }
}

TEST_CASE("scores are identical across worker counts") {
  const auto records = xlqe::read_records(kFixtures / "small_5.jsonl");
  xlqe::ScoreConfig cfg;
  cfg.variant = xlqe::Variant::AlignPpl;
  const auto one = xlqe::score_records(records, cfg, 1);
  const auto many = xlqe::score_records(records, cfg, 8);
  CHECK(xlqe::format_score_table(records, one) == xlqe::format_score_table(records, many));
}

TEST_CASE("evaluate command") {
  const auto gold_path = kFixtures / "small_5_gold.tsv";
  const auto gold = xlqe::read_gold_file(gold_path);
  REQUIRE(gold.size() == 5);

  SUBCASE("scores equal to DA") {
    const auto scores = testgen::temp_path("s.tsv");
    xlqe::write_score_file(scores, gold);
    std::ostringstream out, warn;
    xlqe::run_evaluate({scores, gold_path, std::nullopt, xlqe::CorrelationMetric::Both, std::nullopt},
                       out, warn);
    CHECK(out.str() == "pearson\t1.000\nkendall\t1.000\n");
  }
  SUBCASE("negated DA") {
    auto negated = gold;
    for (auto& [id, v] : negated) v = -v;
    const auto scores = testgen::temp_path("s.tsv");
    xlqe::write_score_file(scores, negated);
    std::ostringstream out, warn;
    xlqe::run_evaluate({scores, gold_path, std::nullopt, xlqe::CorrelationMetric::Both, std::nullopt},
                       out, warn);
    CHECK(out.str() == "pearson\t-1.000\nkendall\t-1.000\n");
  }
  SUBCASE("matches stats calls on the hand-joined series") {
    const auto input = kFixtures / "small_5.jsonl";
    const auto scores = testgen::temp_path("s.tsv");
    xlqe::run_score({input, scores, {}, 1});
    std::ostringstream out, warn;
    const fs::path report_path = testgen::temp_path("report.txt");
    const auto report = xlqe::run_evaluate(
        {scores, gold_path, std::nullopt, xlqe::CorrelationMetric::Both, report_path}, out, warn);

    std::vector<double> xs, ys;
    const auto rows = xlqe::read_score_file(scores);
    for (const auto& [id, s] : rows) {
      xs.push_back(s);
      for (const auto& [gid, g] : gold)
        if (gid == id) ys.push_back(g);
    }
    CHECK(*report.pearson == xlqe::pearson(xs, ys));
    CHECK(*report.kendall == xlqe::kendall(xs, ys));
    CHECK(testgen::read_text(report_path) == out.str());
  }
  SUBCASE("embedded DA, and embedded wins on conflict") {
    const auto input = kFixtures / "small_5.jsonl";
    const auto scores = testgen::temp_path("s.tsv");
    xlqe::run_score({input, scores, {}, 1});
    std::ostringstream a, b, warn;
    xlqe::run_evaluate({scores, std::nullopt, input, xlqe::CorrelationMetric::Pearson, std::nullopt},
                       a, warn);
    CHECK(warn.str().empty());

    auto altered = gold;
    altered[0].second += 100;
    const auto gold2 = testgen::temp_path("gold.tsv");
    std::string text;
    for (const auto& [id, v] : altered) text += id + "\t" + std::to_string(v) + "\n";
    testgen::write_text(gold2, text);
    xlqe::run_evaluate({scores, gold2, input, xlqe::CorrelationMetric::Pearson, std::nullopt}, b, warn);
    CHECK(a.str() == b.str());
    CHECK(warn.str().find("overrides") != std::string::npos);
  }
  SUBCASE("errors") {
    const auto scores = testgen::temp_path("s.tsv");
    std::ostringstream out, warn;
    xlqe::write_score_file(scores, std::vector<xlqe::IdValue>(gold.begin(), gold.end() - 1));
    CHECK_THROWS_AS(xlqe::run_evaluate({scores, gold_path, std::nullopt,
                                        xlqe::CorrelationMetric::Both, std::nullopt},
                                       out, warn),
                    xlqe::DataError);
    xlqe::write_score_file(scores, std::vector<xlqe::IdValue>(gold.begin(), gold.begin() + 1));
    const auto one_gold = testgen::temp_path("g.tsv");
    testgen::write_text(one_gold, gold[0].first + "\t1\n");
    CHECK_THROWS_WITH_AS(xlqe::run_evaluate({scores, one_gold, std::nullopt,
                                             xlqe::CorrelationMetric::Both, std::nullopt},
                                            out, warn),
                         doctest::Contains("at least 2"), xlqe::DataError);
    std::vector<xlqe::IdValue> flat = gold;
    for (auto& [id, v] : flat) v = 0.5;
    xlqe::write_score_file(scores, flat);
    CHECK_THROWS_WITH_AS(xlqe::run_evaluate({scores, gold_path, std::nullopt,
                                             xlqe::CorrelationMetric::Pearson, std::nullopt},
                                            out, warn),
                         doctest::Contains("constant series"), xlqe::DataError);
    testgen::write_text(scores, "id\tvalue\na\t1\n");
    CHECK_THROWS_AS(xlqe::read_score_file(scores), xlqe::DataError);
  }
}

TEST_CASE("sweep specs") {
  const auto lambda = xlqe::SweepSpec::defaults(xlqe::SweepParam::Lambda);
  REQUIRE(lambda.values.size() == 7);
  CHECK(lambda.values.front() == 0.0);
  CHECK(lambda.values.back() == 0.03);
  CHECK(lambda.values[2] == doctest::Approx(0.01));
  CHECK(xlqe::SweepSpec::defaults(xlqe::SweepParam::Penalty).values ==
        std::vector<double>{0.0, 0.2, 0.4, 0.8, 1.0});
  CHECK(xlqe::SweepSpec::from_grid(xlqe::SweepParam::Penalty, 0.5, 0.5, 0.1).values.size() == 1);
  CHECK_THROWS_AS(xlqe::SweepSpec::from_grid(xlqe::SweepParam::Lambda, 0, 0.1, 0), xlqe::InvalidArgument);
  CHECK_THROWS_AS(xlqe::SweepSpec::from_grid(xlqe::SweepParam::Lambda, 0.2, 0.1, 0.1), xlqe::InvalidArgument);
  CHECK_THROWS_AS(xlqe::SweepSpec::from_values(xlqe::SweepParam::Lambda, {0.5, 1.5}), xlqe::InvalidArgument);
  CHECK(xlqe::sweep_variant(xlqe::Variant::Base, xlqe::SweepParam::Lambda) == xlqe::Variant::Ppl);
  CHECK(xlqe::sweep_variant(xlqe::Variant::Align, xlqe::SweepParam::Lambda) == xlqe::Variant::AlignPpl);
  CHECK(xlqe::sweep_variant(xlqe::Variant::Base, xlqe::SweepParam::Penalty) == xlqe::Variant::Align);
  CHECK(xlqe::sweep_variant(xlqe::Variant::Ppl, xlqe::SweepParam::Penalty) == xlqe::Variant::AlignPpl);
}

namespace {

std::vector<std::vector<std::string>> table_rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

std::string evaluate_variant(const fs::path& input, const xlqe::ScoreConfig& cfg,
                             xlqe::CorrelationMetric metric) {
  const auto scores = testgen::temp_path("s.tsv");
  xlqe::run_score({input, scores, cfg, 2});
  std::ostringstream out, warn;
  xlqe::run_evaluate({scores, std::nullopt, input, metric, std::nullopt}, out, warn);
  return out.str();
}

}  // namespace

TEST_CASE("sweep reductions and agreement with unbatched runs") {
  const auto input = kFixtures / "small_5.jsonl";
  std::ostringstream warn;

  SUBCASE("lambda grid") {
    xlqe::SweepCommand cmd;
    cmd.input = input;
    cmd.output = testgen::temp_path("sweep.tsv");
    cmd.sweep = xlqe::SweepSpec::defaults(xlqe::SweepParam::Lambda);
    cmd.metric = xlqe::CorrelationMetric::Both;
    cmd.jobs = 3;
    const auto rows = table_rows(xlqe::run_sweep(cmd, warn));
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "pearson", "kendall"});
    CHECK(rows[1][0] == "0");
    CHECK(rows[7][0] == "0.03");
    const auto base = table_rows(evaluate_variant(input, {}, xlqe::CorrelationMetric::Both));
    CHECK(rows[1][1] == base[0][1]);
    CHECK(rows[1][2] == base[1][1]);
    CHECK(testgen::read_text(cmd.output) == xlqe::run_sweep(cmd, warn));
  }
  SUBCASE("penalty list") {
    xlqe::SweepCommand cmd;
    cmd.input = input;
    cmd.output = testgen::temp_path("sweep.tsv");
    cmd.sweep = xlqe::SweepSpec::defaults(xlqe::SweepParam::Penalty);
    const auto rows = table_rows(xlqe::run_sweep(cmd, warn));
    REQUIRE(rows.size() == 6);
    CHECK(rows[5][0] == "1");
    const auto base = table_rows(evaluate_variant(input, {}, xlqe::CorrelationMetric::Pearson));
    CHECK(rows[5][1] == base[0][1]);
  }
  SUBCASE("two values against separate score + evaluate runs") {
    xlqe::SweepCommand cmd;
    cmd.input = input;
    cmd.output = testgen::temp_path("sweep.tsv");
    cmd.config.variant = xlqe::Variant::AlignPpl;
    cmd.config.normalize_embeddings = true;
    cmd.sweep = xlqe::SweepSpec::from_values(xlqe::SweepParam::Lambda, {0.01, 0.3});
    cmd.metric = xlqe::CorrelationMetric::Both;
    const auto rows = table_rows(xlqe::run_sweep(cmd, warn));
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < 2; ++i) {
      xlqe::ScoreConfig cfg = cmd.config;
      cfg.lambda = cmd.sweep.values[i];
      const auto single = table_rows(evaluate_variant(input, cfg, xlqe::CorrelationMetric::Both));
      CHECK(rows[i + 1][1] == single[0][1]);
      CHECK(rows[i + 1][2] == single[1][1]);
    }
  }
}

TEST_CASE("validate command") {
  std::ostringstream out;
  CHECK(xlqe::run_validate(kFixtures / "small_5.jsonl", out) == xlqe::ExitCode::Ok);
  CHECK(out.str().find("5 records, 5 clean, 0 violations") != std::string::npos);

  std::mt19937_64 rng(67);
  std::vector<xlqe::SentencePairRecord> batch;
  for (int i = 0; i < 10; ++i) batch.push_back(testgen::random_record(rng, "rec" + std::to_string(i)));
  batch[6].alignment = "0-99";
  const auto path = testgen::temp_path("ten.jsonl");
  xlqe::write_records(batch, path);
  std::ostringstream report;
  CHECK(xlqe::run_validate(path, report) == xlqe::ExitCode::DataError);
  CHECK(report.str().find(":7: record \"rec6\": alignment index out of range") != std::string::npos);
  CHECK(report.str().find("10 records, 9 clean, 1 violations") != std::string::npos);

  std::ostringstream ignored;
  CHECK_THROWS_AS(xlqe::run_validate("/no/such/file.jsonl", ignored), xlqe::IoError);
}

TEST_CASE("command-line exit statuses") {
  const std::string fixture = (kFixtures / "small_5.jsonl").string();
  const std::string out = testgen::temp_path("cli.tsv").string();
  CHECK(run_cli("validate --input " + fixture) == 0);
  CHECK(run_cli("score --input " + fixture + " --output " + out + " --jobs 2") == 0);
  CHECK(run_cli("evaluate --scores " + out + " --input " + fixture) == 0);
  CHECK(run_cli("sweep --input " + fixture + " --param penalty --output " + out) == 0);
  CHECK(run_cli("sweep --input " + fixture + " --param lambda --min 0 --max 0.02 --step 0.01 --output " + out) == 0);

  CHECK(run_cli("score --input " + fixture) == 2);
  CHECK(run_cli("score --input " + fixture + " --output " + out + " --variant nope") == 2);
  CHECK(run_cli("score --input " + fixture + " --output " + out + " --lambda 3") == 2);
  CHECK(run_cli("sweep --input " + fixture + " --param lambda --values 0.1 --min 0 --output " + out) == 2);
  CHECK(run_cli("frobnicate") == 2);

  CHECK(run_cli("validate --input /no/such/file.jsonl") == 3);
  CHECK(run_cli("score --input /no/such/file.jsonl --output " + out) == 3);

  const auto bad = testgen::temp_path("bad.jsonl");
  testgen::write_text(bad, "{\"id\":1}\n");
  CHECK(run_cli("validate --input " + bad.string()) == 1);
  CHECK(run_cli("score --input " + bad.string() + " --output " + out) == 1);
}
