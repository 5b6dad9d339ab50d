#ifndef XLQE_EMBEDDING_IO_HPP
#define XLQE_EMBEDDING_IO_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlqe/common.hpp"
#include "xlqe/record.hpp"

namespace xlqe {

/// Record invariants checked by the interchange reader and validator.
enum class Invariant {
  EmptyId,
  DuplicateId,
  EmptySource,
  EmptyCandidate,
  SourceRowCount,
  CandidateRowCount,
  RaggedRow,
  WidthMismatch,
  MetaDim,
  NonFinite,
  AlignmentSyntax,
  AlignmentRange,
};

/// Stable human-readable name; every violation message starts with it.
std::string_view invariant_name(Invariant inv);

struct Violation {
  Invariant invariant;
  std::string detail;

  std::string message() const;
};

/// Raised when a record breaks an invariant while being loaded.
class InvariantError : public DataError {
 public:
  InvariantError(std::string record_id, Violation violation, const std::string& what)
      : DataError(what), record_id_(std::move(record_id)), violation_(std::move(violation)) {}

  const std::string& record_id() const { return record_id_; }
  const Violation& violation() const { return violation_; }

 private:
  std::string record_id_;
  Violation violation_;
};

struct RecordReport {
  std::size_t index = 0;  // position in the input list
  std::string id;
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
};

struct ValidationReport {
  std::vector<RecordReport> records;

  std::size_t violation_count() const;
  bool clean() const { return violation_count() == 0; }
};

/// Checks every record invariant plus id uniqueness across the batch. Never throws for
/// bad records; each problem becomes a report entry.
ValidationReport validate_records(std::span<const SentencePairRecord> records);

/// Invariant violations of a single record (id uniqueness excluded).
std::vector<Violation> validate_record(const SentencePairRecord& record);

/// Parses one interchange line. Structural problems throw DataError; ragged embedding
/// rows throw InvariantError (they cannot be represented in a dense matrix). Other
/// invariants are left to validate_record.
SentencePairRecord parse_record_line(std::string_view line);

/// Serializes one record as a single line (no trailing newline). Reals are written with
/// 9 significant digits.
std::string format_record_line(const SentencePairRecord& record);

/// Rounds to the precision the interchange format stores.
double round_to_serialized(double value);

/// A structural or invariant problem found while reading a file, tied to its line.
struct LineIssue {
  std::size_t line = 0;  // 1-based
  std::string id;        // empty when the line could not be parsed far enough
  std::string message;
};

struct ParsedFile {
  std::vector<SentencePairRecord> records;
  std::vector<std::size_t> record_lines;  // 1-based source line of each record
  std::vector<LineIssue> issues;          // lines that did not yield a record
};

/// Reads every line it can, collecting problems instead of stopping. Throws IoError only.
ParsedFile parse_interchange_file(const std::filesystem::path& path);

/// Reads and fully validates an interchange file; throws on the first problem.
std::vector<SentencePairRecord> read_records(const std::filesystem::path& path);

/// Writes one line per record. Records are expected to be valid.
void write_records(std::span<const SentencePairRecord> records, const std::filesystem::path& path);

}  // namespace xlqe

#endif  // XLQE_EMBEDDING_IO_HPP
