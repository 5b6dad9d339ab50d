#include "xlqe/embedding_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "xlqe/alignment.hpp"

namespace xlqe {

using Json = nlohmann::ordered_json;

bool operator==(const SentencePairRecord& a, const SentencePairRecord& b) {
  auto same_matrix = [](const MatrixXd& x, const MatrixXd& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return a.id == b.id && a.src_tokens == b.src_tokens && a.mt_tokens == b.mt_tokens &&
         same_matrix(a.src_embeddings, b.src_embeddings) &&
         same_matrix(a.mt_embeddings, b.mt_embeddings) && a.alignment == b.alignment &&
         a.gen_score == b.gen_score && a.da_score == b.da_score && a.meta == b.meta;
}

std::string_view invariant_name(Invariant inv) {
  switch (inv) {
    case Invariant::EmptyId: return "empty id";
    case Invariant::DuplicateId: return "duplicate id";
    case Invariant::EmptySource: return "empty source side";
    case Invariant::EmptyCandidate: return "empty candidate side";
    case Invariant::SourceRowCount: return "source row count mismatch";
    case Invariant::CandidateRowCount: return "candidate row count mismatch";
    case Invariant::RaggedRow: return "ragged embedding row";
    case Invariant::WidthMismatch: return "embedding width mismatch";
    case Invariant::MetaDim: return "meta dim mismatch";
    case Invariant::NonFinite: return "non-finite value";
    case Invariant::AlignmentSyntax: return "alignment syntax error";
    case Invariant::AlignmentRange: return "alignment index out of range";
  }
  return "unknown invariant";
}

std::string Violation::message() const {
  std::string out(invariant_name(invariant));
  if (!detail.empty()) out += ": " + detail;
  return out;
}

std::size_t ValidationReport::violation_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.violations.size();
  return n;
}

std::vector<Violation> validate_record(const SentencePairRecord& r) {
  std::vector<Violation> out;
  auto add = [&out](Invariant inv, std::string detail) {
    out.push_back({inv, std::move(detail)});
  };
  const auto src_rows = static_cast<std::size_t>(r.src_embeddings.rows());
  const auto mt_rows = static_cast<std::size_t>(r.mt_embeddings.rows());

  if (r.id.empty()) add(Invariant::EmptyId, "");
  if (r.k() == 0 && src_rows == 0) add(Invariant::EmptySource, "k = 0");
  if (r.l() == 0 && mt_rows == 0) add(Invariant::EmptyCandidate, "l = 0");
  if (src_rows != r.k()) {
    add(Invariant::SourceRowCount, std::to_string(src_rows) + " embedding rows for " +
                                       std::to_string(r.k()) + " source tokens");
  }
  if (mt_rows != r.l()) {
    add(Invariant::CandidateRowCount, std::to_string(mt_rows) + " embedding rows for " +
                                          std::to_string(r.l()) + " candidate tokens");
  }
  const bool both_sides = src_rows > 0 && mt_rows > 0;
  if (both_sides && r.src_embeddings.cols() != r.mt_embeddings.cols()) {
    add(Invariant::WidthMismatch, "source d = " + std::to_string(r.src_embeddings.cols()) +
                                      ", candidate d = " +
                                      std::to_string(r.mt_embeddings.cols()));
  }
  const auto width = src_rows > 0 ? static_cast<std::size_t>(r.src_embeddings.cols())
                                  : static_cast<std::size_t>(r.mt_embeddings.cols());
  if ((src_rows > 0 || mt_rows > 0) && width != r.meta.dim) {
    add(Invariant::MetaDim, "meta.dim = " + std::to_string(r.meta.dim) +
                                " but embeddings have " + std::to_string(width) + " columns");
  }
  if (!r.src_embeddings.allFinite() || !r.mt_embeddings.allFinite()) {
    add(Invariant::NonFinite, "embedding entries must be finite");
  }
  if (!std::isfinite(r.gen_score)) add(Invariant::NonFinite, "gen_score must be finite");
  if (r.da_score && !std::isfinite(*r.da_score)) add(Invariant::NonFinite, "da must be finite");

  try {
    const AlignmentSet align = parse_pharaoh(r.alignment);
    for (const auto& link : align) {
      if (link.src >= r.k() || link.mt >= r.l()) {
        add(Invariant::AlignmentRange, "pair " + std::to_string(link.src) + "-" +
                                           std::to_string(link.mt) + " with k=" +
                                           std::to_string(r.k()) + ", l=" +
                                           std::to_string(r.l()));
        break;
      }
    }
  } catch (const InvalidArgument& e) {
    add(Invariant::AlignmentSyntax, e.what());
  }
  return out;
}

ValidationReport validate_records(std::span<const SentencePairRecord> records) {
  ValidationReport report;
  report.records.reserve(records.size());
  std::unordered_map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    RecordReport entry{i, records[i].id, validate_record(records[i])};
    auto [it, inserted] = first_seen.emplace(records[i].id, i);
    if (!inserted) {
      entry.violations.push_back(
          {Invariant::DuplicateId, "first seen at record " + std::to_string(it->second + 1)});
    }
    report.records.push_back(std::move(entry));
  }
  return report;
}

namespace {

const Json& require(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing key \"") + key + "\"");
  return *it;
}

std::vector<std::string> read_tokens(const Json& value, const char* key) {
  if (!value.is_array()) throw DataError(std::string("\"") + key + "\" must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& t : value) {
    if (!t.is_string()) throw DataError(std::string("\"") + key + "\" entries must be strings");
    out.push_back(t.get<std::string>());
  }
  return out;
}

double read_number(const Json& value, const char* key) {
  if (!value.is_number()) throw DataError(std::string("\"") + key + "\" must be a number");
  return value.get<double>();
}

MatrixXd read_embeddings(const Json& value, const char* key, const std::string& id) {
  if (!value.is_array()) throw DataError(std::string("\"") + key + "\" must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (rows == 0) return MatrixXd(0, 0);
  if (!value[0].is_array()) throw DataError(std::string("\"") + key + "\" rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(value[0].size());
  MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw DataError(std::string("\"") + key + "\" rows must be arrays");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      Violation v{Invariant::RaggedRow, std::string(key) + " row " + std::to_string(i) + " has " +
                                            std::to_string(row.size()) + " entries, row 0 has " +
                                            std::to_string(cols)};
      throw InvariantError(id, v, v.message());
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = read_number(row[static_cast<std::size_t>(j)], key);
    }
  }
  return out;
}

Json write_embeddings(const MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(round_to_serialized(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

double round_to_serialized(double value) {
  if (!std::isfinite(value)) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

SentencePairRecord parse_record_line(std::string_view line) {
  Json obj;
  try {
    obj = Json::parse(line.begin(), line.end());
  } catch (const Json::out_of_range& e) {
    // number literals that overflow a double, e.g. 1e999
    Violation v{Invariant::NonFinite, e.what()};
    throw InvariantError("", v, v.message());
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed record: ") + e.what());
  }
  if (!obj.is_object()) throw DataError("malformed record: line is not an object");

  SentencePairRecord r;
  try {
    const auto& id = require(obj, "id");
    if (!id.is_string()) throw DataError("\"id\" must be a string");
    r.id = id.get<std::string>();
    r.src_tokens = read_tokens(require(obj, "src_tokens"), "src_tokens");
    r.mt_tokens = read_tokens(require(obj, "mt_tokens"), "mt_tokens");
    r.src_embeddings = read_embeddings(require(obj, "src_emb"), "src_emb", r.id);
    r.mt_embeddings = read_embeddings(require(obj, "mt_emb"), "mt_emb", r.id);
    const auto& align = require(obj, "align");
    if (!align.is_string()) throw DataError("\"align\" must be a string");
    r.alignment = align.get<std::string>();
    r.gen_score = read_number(require(obj, "gen_score"), "gen_score");
    const auto& da = require(obj, "da");
    if (!da.is_null()) r.da_score = read_number(da, "da");

    const auto& meta = require(obj, "meta");
    if (!meta.is_object()) throw DataError("\"meta\" must be an object");
    const auto& model = require(meta, "model");
    if (!model.is_string()) throw DataError("\"meta.model\" must be a string");
    r.meta.model = model.get<std::string>();
    const auto& layer = require(meta, "layer");
    if (!layer.is_number_integer()) throw DataError("\"meta.layer\" must be an integer");
    r.meta.layer = layer.get<long>();
    const auto& dim = require(meta, "dim");
    if (!dim.is_number_unsigned()) throw DataError("\"meta.dim\" must be a non-negative integer");
    r.meta.dim = dim.get<std::size_t>();
  } catch (const InvariantError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(r.id.empty() ? std::string(e.what())
                                 : "record \"" + r.id + "\": " + e.what());
  }
  return r;
}

std::string format_record_line(const SentencePairRecord& r) {
  Json obj;
  obj["id"] = r.id;
  obj["src_tokens"] = r.src_tokens;
  obj["mt_tokens"] = r.mt_tokens;
  obj["src_emb"] = write_embeddings(r.src_embeddings);
  obj["mt_emb"] = write_embeddings(r.mt_embeddings);
  obj["align"] = r.alignment;
  obj["gen_score"] = round_to_serialized(r.gen_score);
  obj["da"] = r.da_score ? Json(round_to_serialized(*r.da_score)) : Json(nullptr);
  obj["meta"] = {{"model", r.meta.model}, {"layer", r.meta.layer}, {"dim", r.meta.dim}};
  try {
    return obj.dump();
  } catch (const Json::type_error& e) {
    throw InvalidArgument("record \"" + r.id + "\" is not serializable: " + e.what());
  }
}

ParsedFile parse_interchange_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");

  ParsedFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      out.issues.push_back({lineno, "", "blank line"});
      continue;
    }
    try {
      out.records.push_back(parse_record_line(line));
      out.record_lines.push_back(lineno);
    } catch (const InvariantError& e) {
      out.issues.push_back({lineno, e.record_id(), e.what()});
    } catch (const DataError& e) {
      out.issues.push_back({lineno, "", e.what()});
    }
  }
  if (in.bad()) throw IoError("error while reading " + path.string());
  return out;
}

std::vector<SentencePairRecord> read_records(const std::filesystem::path& path) {
  ParsedFile parsed = parse_interchange_file(path);
  if (!parsed.issues.empty()) {
    const auto& issue = parsed.issues.front();
    throw DataError(path.string() + ":" + std::to_string(issue.line) + ": " + issue.message);
  }
  const ValidationReport report = validate_records(parsed.records);
  for (const auto& entry : report.records) {
    if (!entry.clean()) {
      const auto& v = entry.violations.front();
      throw InvariantError(entry.id, v,
                           path.string() + ":" + std::to_string(parsed.record_lines[entry.index]) +
                               ": record \"" + entry.id + "\": " + v.message());
    }
  }
  return std::move(parsed.records);
}

void write_records(std::span<const SentencePairRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) out << format_record_line(r) << '\n';
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

}  // namespace xlqe
