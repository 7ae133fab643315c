#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "spellnorm/error.hpp"
#include "spellnorm/eval.hpp"

// EvalReport <-> JSON. The schema is versioned; per-token correctness is
// stored as a '0'/'1' string so reports stay compact and comparable.

namespace spellnorm {

inline constexpr std::string_view kReportSchema = "spellnorm-report/1";

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["system"] = r.system;
  j["n_total"] = r.n_total;
  j["n_correct"] = r.n_correct;
  j["word_accuracy"] = r.word_accuracy;
  j["identity_baseline"] = r.identity_baseline;
  j["maximum_accuracy"] = r.maximum_accuracy;
  j["cer"] = r.cer;
  if (r.cer_incorrect)
    j["cer_incorrect"] = *r.cer_incorrect;
  else
    j["cer_incorrect"] = nullptr;
  if (r.stem_accuracy_incorrect)
    j["stem_accuracy_incorrect"] = *r.stem_accuracy_incorrect;
  else
    j["stem_accuracy_incorrect"] = nullptr;
  if (!r.stem_absence_reason.empty()) j["stem_absence_reason"] = r.stem_absence_reason;
  if (r.has_seen_unseen) {
    j["seen"] = {{"n", r.seen.n}, {"n_correct", r.seen.n_correct},
                 {"accuracy", r.seen.accuracy()}};
    j["unseen"] = {{"n", r.unseen.n}, {"n_correct", r.unseen.n_correct},
                   {"accuracy", r.unseen.accuracy()}};
  }
  std::string bits(r.per_token_correctness.size(), '0');
  for (std::size_t i = 0; i < r.per_token_correctness.size(); ++i)
    if (r.per_token_correctness[i]) bits[i] = '1';
  j["per_token_correctness"] = bits;
  return j;
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != kReportSchema)
    throw ParseError("unrecognized report schema");
  EvalReport r;
  r.system = j.value("system", std::string{});
  r.n_total = j.at("n_total").get<std::size_t>();
  r.n_correct = j.at("n_correct").get<std::size_t>();
  r.word_accuracy = j.at("word_accuracy").get<double>();
  r.identity_baseline = j.at("identity_baseline").get<double>();
  r.maximum_accuracy = j.at("maximum_accuracy").get<double>();
  r.cer = j.at("cer").get<double>();
  if (!j.at("cer_incorrect").is_null()) r.cer_incorrect = j.at("cer_incorrect").get<double>();
  if (!j.at("stem_accuracy_incorrect").is_null())
    r.stem_accuracy_incorrect = j.at("stem_accuracy_incorrect").get<double>();
  r.stem_absence_reason = j.value("stem_absence_reason", std::string{});
  if (j.contains("seen")) {
    r.has_seen_unseen = true;
    r.seen.n = j.at("seen").at("n").get<std::size_t>();
    r.seen.n_correct = j.at("seen").at("n_correct").get<std::size_t>();
    r.unseen.n = j.at("unseen").at("n").get<std::size_t>();
    r.unseen.n_correct = j.at("unseen").at("n_correct").get<std::size_t>();
  }
  const std::string bits = j.at("per_token_correctness").get<std::string>();
  r.per_token_correctness.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) r.per_token_correctness[i] = bits[i] == '1';
  return r;
}

// One-line summary suitable for assembling result tables.
inline std::string report_row(const EvalReport& r) {
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
    return std::string(buf);
  };
  auto rate = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  std::string row = r.system + "\t" + pct(r.word_accuracy) + "\t" +
                    pct(r.identity_baseline) + "\t" + pct(r.maximum_accuracy) + "\t";
  row += r.cer_incorrect ? rate(*r.cer_incorrect) : std::string("-");
  row += "\t";
  row += r.stem_accuracy_incorrect ? pct(*r.stem_accuracy_incorrect) : std::string("-");
  if (r.has_seen_unseen)
    row += "\t" + pct(r.seen.accuracy()) + "\t" + pct(r.unseen.accuracy());
  return row;
}

}  // namespace spellnorm
