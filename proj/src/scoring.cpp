#include "xlqe/scoring.hpp"

#include "xlqe/record.hpp"

namespace xlqe {

Variant parse_variant(std::string_view name) {
  if (name == "base") return Variant::Base;
  if (name == "align") return Variant::Align;
  if (name == "ppl") return Variant::Ppl;
  if (name == "align+ppl") return Variant::AlignPpl;
  throw InvalidArgument("unknown variant \"" + std::string(name) + "\"");
}

Measure parse_measure(std::string_view name) {
  if (name == "f") return Measure::F;
  if (name == "p") return Measure::P;
  if (name == "r") return Measure::R;
  throw InvalidArgument("unknown measure \"" + std::string(name) + "\"");
}

GenScoreSign parse_gen_score_sign(std::string_view name) {
  if (name == "as_is") return GenScoreSign::AsIs;
  if (name == "negated") return GenScoreSign::Negated;
  throw InvalidArgument("unknown generation-score sign \"" + std::string(name) + "\"");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::Align: return "align";
    case Variant::Ppl: return "ppl";
    case Variant::AlignPpl: return "align+ppl";
  }
  return "?";
}

std::string to_string(Measure m) {
  switch (m) {
    case Measure::F: return "f";
    case Measure::P: return "p";
    case Measure::R: return "r";
  }
  return "?";
}

std::string to_string(GenScoreSign s) {
  return s == GenScoreSign::AsIs ? "as_is" : "negated";
}

void ScoreConfig::validate() const {
  if (!(penalty_a >= 0.0 && penalty_a <= 1.0)) {
    throw InvalidArgument("penalty weight must lie in [0, 1]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("interpolation weight lambda must lie in [0, 1]");
  }
}

PreparedPair prepare_pair(const SentencePairRecord& record, bool normalize, bool parse_alignment) {
  if (static_cast<std::size_t>(record.src_embeddings.rows()) != record.k() ||
      static_cast<std::size_t>(record.mt_embeddings.rows()) != record.l()) {
    throw InvalidArgument("embedding rows do not match token counts");
  }
  PreparedPair out{similarity_matrix(record.src_embeddings, record.mt_embeddings, normalize),
                   {}, record.gen_score};
  if (parse_alignment) out.alignment = parse_pharaoh(record.alignment);
  return out;
}

QEScore score_prepared(const PreparedPair& pair, const ScoreConfig& config) {
  config.validate();
  QEScore score;
  if (uses_alignment(config.variant)) {
    const auto mask = build_mask(pair.alignment, static_cast<std::size_t>(pair.sim.rows()),
                                 static_cast<std::size_t>(pair.sim.cols()), config.penalty_a);
    score = masked_bertscore(pair.sim, mask, config.measure);
  } else {
    score = bertscore(pair.sim, config.measure);
  }
  if (uses_generation_score(config.variant)) {
    const double gen =
        config.gen_score_sign == GenScoreSign::Negated ? -pair.gen_score : pair.gen_score;
    score.final = combine_generation_score(score.final, gen, config.lambda);
  }
  score.variant = config.variant;
  return score;
}

QEScore score_pair(const SentencePairRecord& record, const ScoreConfig& config) {
  config.validate();
  return score_prepared(
      prepare_pair(record, config.normalize_embeddings, uses_alignment(config.variant)), config);
}

}  // namespace xlqe
