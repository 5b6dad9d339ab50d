#include "xlqe/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "xlqe/embedding_io.hpp"
#include "xlqe/stats.hpp"

namespace xlqe {

namespace {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string format_param(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

// Value as it reads back from a score file.
double quantize_score(double value) { return std::strtod(format_fixed(value, 6).c_str(), nullptr); }

bool parse_real(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Rethrows the exception of the
// lowest failing index; indices past a known failure are skipped.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(mutex);
        if (i > failed_index) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

template <typename Fn>
auto with_record_context(const SentencePairRecord& record, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw DataError("record \"" + record.id + "\": " + e.what());
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<IdValue> read_id_value_file(const std::filesystem::path& path,
                                        const std::string& header, bool header_required) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<IdValue> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line == header) continue;
      if (header_required) {
        throw DataError(path.string() + ":1: expected header \"" + header + "\"");
      }
    }
    if (line.empty()) throw DataError(path.string() + ":" + std::to_string(lineno) + ": blank line");
    const auto fields = split_tabs(line);
    double value = 0.0;
    if (fields.size() != 2 || fields[0].empty() || !parse_real(fields[1], value)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected \"id<TAB>number\"");
    }
    rows.emplace_back(fields[0], value);
  }
  if (in.bad()) throw IoError("error while reading " + path.string());
  return rows;
}

}  // namespace

CorrelationMetric parse_correlation_metric(std::string_view name) {
  if (name == "pearson") return CorrelationMetric::Pearson;
  if (name == "kendall") return CorrelationMetric::Kendall;
  if (name == "both") return CorrelationMetric::Both;
  throw InvalidArgument("unknown correlation metric \"" + std::string(name) + "\"");
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "lambda") return SweepParam::Lambda;
  if (name == "penalty") return SweepParam::Penalty;
  throw InvalidArgument("unknown sweep parameter \"" + std::string(name) + "\"");
}

std::string to_string(SweepParam p) { return p == SweepParam::Lambda ? "lambda" : "penalty"; }

SweepSpec SweepSpec::from_values(SweepParam param, std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("sweep needs at least one value");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("sweep value " + format_param(v) + " outside [0, 1]");
    }
  }
  return SweepSpec{param, std::move(values)};
}

SweepSpec SweepSpec::from_grid(SweepParam param, double min, double max, double step) {
  if (!(step > 0.0)) throw InvalidArgument("sweep grid step must be positive");
  if (!(min <= max)) throw InvalidArgument("sweep grid needs min <= max");
  const double span = (max - min) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    values.push_back(std::min(min + static_cast<double>(i) * step, max));
  }
  return from_values(param, std::move(values));
}

SweepSpec SweepSpec::defaults(SweepParam param) {
  if (param == SweepParam::Lambda) return from_grid(param, 0.0, 0.03, 0.005);
  return from_values(param, {0.0, 0.2, 0.4, 0.8, 1.0});
}

std::vector<QEScore> score_records(std::span<const SentencePairRecord> records,
                                   const ScoreConfig& config, unsigned jobs) {
  config.validate();
  std::vector<QEScore> scores(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    scores[i] = with_record_context(records[i], [&] { return score_pair(records[i], config); });
  });
  return scores;
}

std::string format_score_table(std::span<const SentencePairRecord> records,
                               std::span<const QEScore> scores) {
  std::string out = "id\tscore\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += records[i].id + "\t" + format_fixed(scores[i].final, 6) + "\n";
  }
  return out;
}

std::vector<IdValue> read_score_file(const std::filesystem::path& path) {
  return read_id_value_file(path, "id\tscore", true);
}

void write_score_file(const std::filesystem::path& path, std::span<const IdValue> rows) {
  std::string out = "id\tscore\n";
  for (const auto& [id, value] : rows) out += id + "\t" + format_fixed(value, 6) + "\n";
  write_file_atomically(path, out);
}

std::vector<IdValue> read_gold_file(const std::filesystem::path& path) {
  return read_id_value_file(path, "id\tda", false);
}

std::vector<IdValue> collect_gold(const std::optional<std::filesystem::path>& gold_tsv,
                                  std::span<const SentencePairRecord> records,
                                  std::ostream& warnings) {
  std::vector<IdValue> gold;
  std::unordered_map<std::string, std::size_t> index;
  if (gold_tsv) {
    for (auto& row : read_gold_file(*gold_tsv)) {
      if (!index.emplace(row.first, gold.size()).second) {
        throw DataError("duplicate gold id \"" + row.first + "\" in " + gold_tsv->string());
      }
      gold.push_back(std::move(row));
    }
  }
  for (const auto& r : records) {
    if (!r.da_score) continue;
    auto it = index.find(r.id);
    if (it == index.end()) {
      index.emplace(r.id, gold.size());
      gold.emplace_back(r.id, *r.da_score);
    } else if (gold[it->second].second != *r.da_score) {
      warnings << "warning: id \"" << r.id << "\": embedded DA " << *r.da_score
               << " overrides gold file value " << gold[it->second].second << "\n";
      gold[it->second].second = *r.da_score;
    }
  }
  return gold;
}

std::string CorrelationReport::format() const {
  std::string out;
  if (pearson) out += "pearson\t" + format_fixed(*pearson, 3) + "\n";
  if (kendall) out += "kendall\t" + format_fixed(*kendall, 3) + "\n";
  return out;
}

CorrelationReport correlate(std::span<const IdValue> scores, std::span<const IdValue> gold,
                            CorrelationMetric metric) {
  const ScoredPairSeries series = join_by_id(scores, gold);
  if (series.size() < 2) throw DataError("need at least 2 joined pairs to correlate");
  CorrelationReport report;
  report.pairs = series.size();
  if (metric != CorrelationMetric::Kendall) report.pearson = pearson(series);
  if (metric != CorrelationMetric::Pearson) report.kendall = kendall(series);
  return report;
}

Variant sweep_variant(Variant base, SweepParam param) {
  if (param == SweepParam::Lambda) {
    return uses_alignment(base) ? Variant::AlignPpl : Variant::Ppl;
  }
  return uses_generation_score(base) ? Variant::AlignPpl : Variant::Align;
}

void run_score(const ScoreCommand& cmd) {
  cmd.config.validate();
  const auto records = read_records(cmd.input);
  const auto scores = score_records(records, cmd.config, cmd.jobs);
  write_file_atomically(cmd.output, format_score_table(records, scores));
}

CorrelationReport run_evaluate(const EvaluateCommand& cmd, std::ostream& out,
                               std::ostream& warnings) {
  if (!cmd.gold && !cmd.input) {
    throw InvalidArgument("evaluate needs --gold and/or --input as the DA source");
  }
  const auto scores = read_score_file(cmd.scores);
  std::vector<SentencePairRecord> records;
  if (cmd.input) records = read_records(*cmd.input);
  const auto gold = collect_gold(cmd.gold, records, warnings);
  const CorrelationReport report = correlate(scores, gold, cmd.metric);
  const std::string text = report.format();
  out << text;
  if (cmd.output) write_file_atomically(*cmd.output, text);
  return report;
}

std::string run_sweep(const SweepCommand& cmd, std::ostream& warnings) {
  cmd.config.validate();
  const auto records = read_records(cmd.input);
  const auto gold = collect_gold(cmd.gold, records, warnings);

  ScoreConfig config = cmd.config;
  config.variant = sweep_variant(cmd.config.variant, cmd.sweep.param);

  // Similarity matrices and alignments do not depend on the swept value.
  std::vector<std::optional<PreparedPair>> prepared(records.size());
  parallel_for(records.size(), cmd.jobs, [&](std::size_t i) {
    prepared[i] = with_record_context(records[i], [&] {
      return prepare_pair(records[i], config.normalize_embeddings, uses_alignment(config.variant));
    });
  });

  std::string table = to_string(cmd.sweep.param);
  if (cmd.metric != CorrelationMetric::Kendall) table += "\tpearson";
  if (cmd.metric != CorrelationMetric::Pearson) table += "\tkendall";
  table += "\n";

  for (double value : cmd.sweep.values) {
    ScoreConfig point = config;
    (cmd.sweep.param == SweepParam::Lambda ? point.lambda : point.penalty_a) = value;
    point.validate();
    std::vector<IdValue> scores(records.size());
    parallel_for(records.size(), cmd.jobs, [&](std::size_t i) {
      const QEScore s =
          with_record_context(records[i], [&] { return score_prepared(*prepared[i], point); });
      scores[i] = {records[i].id, quantize_score(s.final)};
    });
    const CorrelationReport report = correlate(scores, gold, cmd.metric);
    table += format_param(value);
    if (report.pearson) table += "\t" + format_fixed(*report.pearson, 3);
    if (report.kendall) table += "\t" + format_fixed(*report.kendall, 3);
    table += "\n";
  }
  write_file_atomically(cmd.output, table);
  return table;
}

ExitCode run_validate(const std::filesystem::path& input, std::ostream& out) {
  const ParsedFile parsed = parse_interchange_file(input);
  const ValidationReport report = validate_records(parsed.records);

  std::size_t problems = parsed.issues.size();
  for (const auto& issue : parsed.issues) {
    out << input.string() << ":" << issue.line << ": ";
    if (!issue.id.empty()) out << "record \"" << issue.id << "\": ";
    out << issue.message << "\n";
  }
  for (const auto& entry : report.records) {
    for (const auto& v : entry.violations) {
      out << input.string() << ":" << parsed.record_lines[entry.index] << ": record \""
          << entry.id << "\": " << v.message() << "\n";
      ++problems;
    }
  }
  const std::size_t total = parsed.records.size() + parsed.issues.size();
  std::size_t bad_records = parsed.issues.size();
  for (const auto& entry : report.records) bad_records += entry.clean() ? 0 : 1;
  out << total << " records, " << (total - bad_records) << " clean, " << problems
      << " violations\n";
  return problems == 0 ? ExitCode::Ok : ExitCode::DataError;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("error while writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

}  // namespace xlqe
