#ifndef XLQE_COMMANDS_HPP
#define XLQE_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xlqe/record.hpp"
#include "xlqe/scoring.hpp"

namespace xlqe {

/// Process exit statuses of the command-line tool.
enum class ExitCode : int { Ok = 0, DataError = 1, UsageError = 2, IoError = 3 };

using IdValue = std::pair<std::string, double>;

enum class CorrelationMetric { Pearson, Kendall, Both };
CorrelationMetric parse_correlation_metric(std::string_view name);

enum class SweepParam { Lambda, Penalty };
SweepParam parse_sweep_param(std::string_view name);
std::string to_string(SweepParam p);

struct SweepSpec {
  SweepParam param = SweepParam::Lambda;
  std::vector<double> values;

  /// Explicit value list; every value must lie in [0, 1].
  static SweepSpec from_values(SweepParam param, std::vector<double> values);
  /// Inclusive grid min, min + step, ... up to max.
  static SweepSpec from_grid(SweepParam param, double min, double max, double step);
  /// 0 to 0.03 step 0.005 for lambda; {0, 0.2, 0.4, 0.8, 1} for penalty.
  static SweepSpec defaults(SweepParam param);
};

/// Scores every record with a pool of `jobs` workers. Results follow input order. The
/// first failing record (lowest index) aborts the batch with a DataError naming its id.
std::vector<QEScore> score_records(std::span<const SentencePairRecord> records,
                                   const ScoreConfig& config, unsigned jobs);

/// Score file: header "id\tscore", then one row per record with 6 decimals.
std::string format_score_table(std::span<const SentencePairRecord> records,
                               std::span<const QEScore> scores);
std::vector<IdValue> read_score_file(const std::filesystem::path& path);
void write_score_file(const std::filesystem::path& path, std::span<const IdValue> rows);

/// Gold file: "id\tda" rows, optionally preceded by the header "id\tda".
std::vector<IdValue> read_gold_file(const std::filesystem::path& path);

/// Merges gold DA values from a TSV file and from records' embedded `da` fields. Embedded
/// values win; conflicting values are reported on `warnings`.
std::vector<IdValue> collect_gold(const std::optional<std::filesystem::path>& gold_tsv,
                                  std::span<const SentencePairRecord> records,
                                  std::ostream& warnings);

struct CorrelationReport {
  std::size_t pairs = 0;
  std::optional<double> pearson;
  std::optional<double> kendall;

  /// One "name\tvalue" line per computed correlation, 3 decimals.
  std::string format() const;
};

CorrelationReport correlate(std::span<const IdValue> scores, std::span<const IdValue> gold,
                            CorrelationMetric metric);

struct ScoreCommand {
  std::filesystem::path input;
  std::filesystem::path output;
  ScoreConfig config;
  unsigned jobs = 1;
};

struct EvaluateCommand {
  std::filesystem::path scores;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> input;  // interchange file with embedded DA
  CorrelationMetric metric = CorrelationMetric::Both;
  std::optional<std::filesystem::path> output;
};

struct SweepCommand {
  std::filesystem::path input;
  std::optional<std::filesystem::path> gold;
  std::filesystem::path output;
  ScoreConfig config;
  SweepSpec sweep;
  CorrelationMetric metric = CorrelationMetric::Pearson;
  unsigned jobs = 1;
};

/// Variant actually swept: a lambda sweep needs the generation score, a penalty sweep
/// needs the alignment mask; the base variant is upgraded accordingly.
Variant sweep_variant(Variant base, SweepParam param);

void run_score(const ScoreCommand& cmd);
CorrelationReport run_evaluate(const EvaluateCommand& cmd, std::ostream& out, std::ostream& warnings);
std::string run_sweep(const SweepCommand& cmd, std::ostream& warnings);
/// Prints a validation report; returns Ok iff the file is clean.
ExitCode run_validate(const std::filesystem::path& input, std::ostream& out);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace xlqe

#endif  // XLQE_COMMANDS_HPP
