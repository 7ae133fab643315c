#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "spellnorm/io.hpp"
#include "spellnorm/normalizer.hpp"

// Versioned, self-describing text serialization for trained models.
// Everything is emitted from ordered containers with fixed number
// formatting, so identical models serialize to identical bytes and
// save -> load -> save reproduces the file exactly.

namespace spellnorm {

inline constexpr std::string_view kModelFormatTag = "spellnorm-model/1";

namespace model_io_detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_hex(char32_t cp) {
  char buf[12];
  std::snprintf(buf, sizeof(buf), "%04x", static_cast<unsigned>(cp));
  return buf;
}

inline std::string fmt_hex_string(const std::u32string& s) {
  if (s.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += fmt_hex(s[i]);
  }
  return out;
}

inline std::u32string parse_hex_string(const std::string& s) {
  if (s == "-") return {};
  std::u32string out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string part =
        comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
    out.push_back(static_cast<char32_t>(std::strtoul(part.c_str(), nullptr, 16)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct LineReader {
  const std::vector<std::string>* lines;
  std::size_t pos = 0;

  const std::string& next() {
    if (pos >= lines->size()) throw ParseError("model file truncated");
    return (*lines)[pos++];
  }

  void expect(std::string_view what, const std::string& line, bool ok) {
    if (!ok)
      throw ParseError("model file line " + std::to_string(pos) + ": expected " +
                       std::string(what) + ", got '" + line + "'");
  }
};

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start < line.size()) {
    const std::size_t space = line.find(' ', start);
    if (space == std::string::npos) {
      words.push_back(line.substr(start));
      break;
    }
    if (space > start) words.push_back(line.substr(start, space - start));
    start = space + 1;
  }
  return words;
}

// --- lookup ---------------------------------------------------------------

inline void write_lookup(const LookupTable& table, std::vector<std::string>& out) {
  out.push_back("lookup " + std::to_string(table.mapping.size()));
  for (const auto& [source, e] : table.mapping)
    out.push_back(source + "\t" + e.target + "\t" + std::to_string(e.count) + "\t" +
                  std::to_string(e.total));
}

inline LookupTable read_lookup(LineReader& in) {
  const auto header = split_words(in.next());
  in.expect("lookup header", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "lookup");
  LookupTable table;
  const std::size_t n = std::stoull(header[1]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split_fields(in.next());
    in.expect("lookup entry", f.empty() ? "" : f[0], f.size() == 4);
    table.mapping.emplace(f[0], LookupTable::Entry{f[1], std::stoull(f[2]), std::stoull(f[3])});
  }
  return table;
}

// --- rules ----------------------------------------------------------------

inline void write_rules(const RuleSet& set, std::vector<std::string>& out) {
  std::vector<std::string> lines;
  for (const auto& [key, targets] : set.rules) {
    for (const auto& [target, count] : targets) {
      lines.push_back(uni::encode_utf8(std::u32string(1, key.left)) + "\t" +
                      uni::encode_utf8(std::u32string(1, key.source)) + "\t" +
                      uni::encode_utf8(std::u32string(1, key.right)) + "\t" +
                      uni::encode_utf8(target) + "\t" + std::to_string(count));
    }
  }
  std::sort(lines.begin(), lines.end());
  out.push_back("rules " + std::to_string(lines.size()));
  out.insert(out.end(), lines.begin(), lines.end());
}

inline RuleSet read_rules(LineReader& in) {
  const auto header = split_words(in.next());
  in.expect("rules header", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "rules");
  RuleSet set;
  const std::size_t n = std::stoull(header[1]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split_fields(in.next());
    in.expect("rule entry", f.empty() ? "" : f[0], f.size() == 5);
    const RuleKey key{uni::decode_utf8(f[1])[0], uni::decode_utf8(f[0])[0],
                      uni::decode_utf8(f[2])[0]};
    set.add(key, uni::decode_utf8(f[3]), std::stoull(f[4]));
  }
  return set;
}

// --- edit weights + lexicon -----------------------------------------------

inline void write_weights(const EditWeightMatrix& w, std::vector<std::string>& out) {
  out.push_back("weights " + std::to_string(w.costs.size()) + " default " +
                fmt_double(w.default_cost));
  for (const auto& [op, cost] : w.costs) {
    const std::u32string s = op.first ? std::u32string(1, op.first) : std::u32string();
    const std::u32string t = op.second ? std::u32string(1, op.second) : std::u32string();
    out.push_back(uni::encode_utf8(s) + "\t" + uni::encode_utf8(t) + "\t" + fmt_double(cost));
  }
}

inline EditWeightMatrix read_weights(LineReader& in) {
  const auto header = split_words(in.next());
  in.expect("weights header", header.empty() ? "" : header[0],
            header.size() == 4 && header[0] == "weights" && header[2] == "default");
  EditWeightMatrix w;
  w.default_cost = std::strtod(header[3].c_str(), nullptr);
  const std::size_t n = std::stoull(header[1]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split_fields(in.next());
    in.expect("weight entry", f.empty() ? "" : f[0], f.size() == 3);
    const std::u32string s = uni::decode_utf8(f[0]);
    const std::u32string t = uni::decode_utf8(f[1]);
    w.costs[{s.empty() ? 0 : s[0], t.empty() ? 0 : t[0]}] = std::strtod(f[2].c_str(), nullptr);
  }
  return w;
}

inline void write_lexicon(const Lexicon& lex, std::vector<std::string>& out) {
  out.push_back("lexicon " + std::to_string(lex.entries.size()));
  for (const auto& [word, freq] : lex.entries)
    out.push_back(word + "\t" + std::to_string(freq));
}

inline Lexicon read_lexicon_section(LineReader& in) {
  const auto header = split_words(in.next());
  in.expect("lexicon header", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "lexicon");
  Lexicon lex;
  const std::size_t n = std::stoull(header[1]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = split_fields(in.next());
    in.expect("lexicon entry", f.empty() ? "" : f[0], f.size() == 2);
    lex.entries[f[0]] = std::stoull(f[1]);
  }
  return lex;
}

// --- channel --------------------------------------------------------------

inline void write_channel(const ChannelModel& m, std::vector<std::string>& out) {
  std::size_t unit_lines = 0;
  for (const auto& [source, targets] : m.table.entries) unit_lines += targets.size();
  out.push_back("units " + std::to_string(unit_lines));
  for (const auto& [source, targets] : m.table.entries)
    for (const auto& [target, stats] : targets)
      out.push_back(uni::encode_utf8(source) + "\t" + uni::encode_utf8(target) + "\t" +
                    std::to_string(stats.count) + "\t" + fmt_double(stats.prob));

  out.push_back("lm-order " + std::to_string(m.lm.order));
  std::string alphabet = "lm-alphabet";
  for (char32_t c : m.lm.alphabet) alphabet += " " + fmt_hex(c);
  out.push_back(alphabet);
  std::size_t context_lines = 0;
  for (const auto& level : m.lm.by_length) context_lines += level.size();
  out.push_back("lm-contexts " + std::to_string(context_lines));
  for (std::size_t k = 0; k < m.lm.by_length.size(); ++k) {
    for (const auto& [ctx, stats] : m.lm.by_length[k]) {
      std::string line = std::to_string(k) + "\t" + fmt_hex_string(ctx) + "\t";
      bool first = true;
      for (const auto& [event, count] : stats.events) {
        if (!first) line += ' ';
        line += fmt_hex(event) + ":" + std::to_string(count);
        first = false;
      }
      out.push_back(std::move(line));
    }
  }
  out.push_back("lm-weight " + fmt_double(m.lm_weight));
  out.push_back("beam-width " + std::to_string(m.beam_width));
  out.push_back("max-unit " + std::to_string(m.max_unit));
}

inline ChannelModel read_channel(LineReader& in) {
  ChannelModel m;
  auto header = split_words(in.next());
  in.expect("units header", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "units");
  const std::size_t units = std::stoull(header[1]);
  for (std::size_t i = 0; i < units; ++i) {
    const auto f = split_fields(in.next());
    in.expect("unit entry", f.empty() ? "" : f[0], f.size() == 4);
    m.table.entries[uni::decode_utf8(f[0])][uni::decode_utf8(f[1])] =
        SubstitutionTable::TargetStats{std::stoull(f[2]), std::strtod(f[3].c_str(), nullptr)};
  }

  header = split_words(in.next());
  in.expect("lm-order", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "lm-order");
  m.lm.order = std::stoi(header[1]);
  m.lm.by_length.resize(static_cast<std::size_t>(m.lm.order));

  header = split_words(in.next());
  in.expect("lm-alphabet", header.empty() ? "" : header[0],
            !header.empty() && header[0] == "lm-alphabet");
  for (std::size_t i = 1; i < header.size(); ++i)
    m.lm.alphabet.insert(static_cast<char32_t>(std::strtoul(header[i].c_str(), nullptr, 16)));

  header = split_words(in.next());
  in.expect("lm-contexts", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "lm-contexts");
  const std::size_t contexts = std::stoull(header[1]);
  for (std::size_t i = 0; i < contexts; ++i) {
    const auto f = split_fields(in.next());
    in.expect("lm context", f.empty() ? "" : f[0], f.size() == 3);
    const std::size_t k = std::stoull(f[0]);
    auto& stats = m.lm.by_length.at(k)[parse_hex_string(f[1])];
    for (const std::string& pair : split_words(f[2])) {
      const std::size_t colon = pair.find(':');
      in.expect("event:count", pair, colon != std::string::npos);
      const char32_t event =
          static_cast<char32_t>(std::strtoul(pair.substr(0, colon).c_str(), nullptr, 16));
      const std::uint64_t count = std::stoull(pair.substr(colon + 1));
      stats.events[event] = count;
      stats.total += count;
    }
  }

  header = split_words(in.next());
  in.expect("lm-weight", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "lm-weight");
  m.lm_weight = std::strtod(header[1].c_str(), nullptr);
  header = split_words(in.next());
  in.expect("beam-width", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "beam-width");
  m.beam_width = std::stoi(header[1]);
  header = split_words(in.next());
  in.expect("max-unit", header.empty() ? "" : header[0],
            header.size() == 2 && header[0] == "max-unit");
  m.max_unit = std::stoi(header[1]);
  return m;
}

// --- whole models ---------------------------------------------------------

inline void write_model(const NormalizerModel& model, std::vector<std::string>& out);

inline void write_chain(const ChainModel& chain, std::vector<std::string>& out) {
  std::string components = "chain-components";
  if (chain.lookup) components += " lookup";
  if (chain.rules) components += " rules";
  if (chain.weights) components += " distance";
  out.push_back(std::move(components));
  if (chain.lookup) write_lookup(*chain.lookup, out);
  if (chain.rules) write_rules(*chain.rules, out);
  if (chain.weights) write_weights(*chain.weights, out);
  write_lexicon(chain.lexicon, out);
  out.push_back("threshold " + fmt_double(chain.threshold));
}

inline ChainModel read_chain(LineReader& in) {
  const auto components = split_words(in.next());
  in.expect("chain-components", components.empty() ? "" : components[0],
            !components.empty() && components[0] == "chain-components");
  ChainModel chain;
  bool has_lookup = false, has_rules = false, has_distance = false;
  for (std::size_t i = 1; i < components.size(); ++i) {
    if (components[i] == "lookup") has_lookup = true;
    else if (components[i] == "rules") has_rules = true;
    else if (components[i] == "distance") has_distance = true;
    else throw ParseError("unknown chain component '" + components[i] + "'");
  }
  if (has_lookup) chain.lookup = read_lookup(in);
  if (has_rules) chain.rules = read_rules(in);
  if (has_distance) chain.weights = read_weights(in);
  chain.lexicon = read_lexicon_section(in);
  const auto threshold = split_words(in.next());
  in.expect("threshold", threshold.empty() ? "" : threshold[0],
            threshold.size() == 2 && threshold[0] == "threshold");
  chain.threshold = std::strtod(threshold[1].c_str(), nullptr);
  return chain;
}

inline void write_hybrid(const HybridModel& hybrid, std::vector<std::string>& out) {
  std::vector<std::string> part;
  write_model(*hybrid.lookup, part);
  out.push_back("submodel " + std::to_string(part.size()));
  out.insert(out.end(), part.begin(), part.end());
  part.clear();
  write_model(*hybrid.backoff, part);
  out.push_back("submodel " + std::to_string(part.size()));
  out.insert(out.end(), part.begin(), part.end());
}

inline NormalizerModel read_model(LineReader& in);

inline HybridModel read_hybrid(LineReader& in) {
  HybridModel hybrid;
  for (int part = 0; part < 2; ++part) {
    const auto header = split_words(in.next());
    in.expect("submodel header", header.empty() ? "" : header[0],
              header.size() == 2 && header[0] == "submodel");
    NormalizerModel sub = read_model(in);
    if (part == 0)
      hybrid.lookup = std::make_shared<const NormalizerModel>(std::move(sub));
    else
      hybrid.backoff = std::make_shared<const NormalizerModel>(std::move(sub));
  }
  return hybrid;
}

inline void write_model(const NormalizerModel& model, std::vector<std::string>& out) {
  out.emplace_back(kModelFormatTag);
  out.push_back("backend " + to_string(model.backend));
  out.push_back("vocab " + std::to_string(model.source_vocabulary.size()));
  for (const auto& word : model.source_vocabulary) out.push_back(word);
  std::visit(
      [&out](const auto& state) {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, LookupTable>) {
          write_lookup(state, out);
        } else if constexpr (std::is_same_v<T, RuleSet>) {
          write_rules(state, out);
        } else if constexpr (std::is_same_v<T, DistanceModel>) {
          write_weights(state.weights, out);
          write_lexicon(state.lexicon, out);
          out.push_back("threshold " + fmt_double(state.threshold));
        } else if constexpr (std::is_same_v<T, ChannelModel>) {
          write_channel(state, out);
        } else if constexpr (std::is_same_v<T, ChainModel>) {
          write_chain(state, out);
        } else {
          write_hybrid(state, out);
        }
      },
      model.state);
  out.push_back("end");
}

inline NormalizerModel read_model(LineReader& in) {
  const std::string& tag = in.next();
  if (tag != kModelFormatTag)
    throw ParseError("not a spellnorm model file (format tag '" + tag + "')");
  NormalizerModel model;
  const auto backend = split_words(in.next());
  in.expect("backend", backend.empty() ? "" : backend[0],
            backend.size() == 2 && backend[0] == "backend");
  try {
    model.backend = backend_from_string(backend[1]);
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }

  const auto vocab = split_words(in.next());
  in.expect("vocab", vocab.empty() ? "" : vocab[0],
            vocab.size() == 2 && vocab[0] == "vocab");
  const std::size_t vocab_size = std::stoull(vocab[1]);
  for (std::size_t i = 0; i < vocab_size; ++i) model.source_vocabulary.insert(in.next());

  switch (model.backend) {
    case Backend::lookup:
      model.state = read_lookup(in);
      break;
    case Backend::rules:
      model.state = read_rules(in);
      break;
    case Backend::distance: {
      DistanceModel dm;
      dm.weights = read_weights(in);
      dm.lexicon = read_lexicon_section(in);
      const auto threshold = split_words(in.next());
      in.expect("threshold", threshold.empty() ? "" : threshold[0],
                threshold.size() == 2 && threshold[0] == "threshold");
      dm.threshold = std::strtod(threshold[1].c_str(), nullptr);
      model.state = std::move(dm);
      break;
    }
    case Backend::channel:
      model.state = read_channel(in);
      break;
    case Backend::chain:
      model.state = read_chain(in);
      break;
    case Backend::hybrid:
      model.state = read_hybrid(in);
      break;
  }
  const std::string& end = in.next();
  if (end != "end") throw ParseError("model payload not terminated by 'end'");
  return model;
}

}  // namespace model_io_detail

inline std::string format_model(const NormalizerModel& model) {
  std::vector<std::string> lines;
  model_io_detail::write_model(model, lines);
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

inline NormalizerModel parse_model(std::string_view text) {
  const std::vector<std::string> lines = io::split_lines(text);
  model_io_detail::LineReader reader{&lines, 0};
  return model_io_detail::read_model(reader);
}

inline void save_model(const NormalizerModel& model, const std::string& path) {
  io::write_file(path, format_model(model));
}

inline NormalizerModel load_model(const std::string& path) {
  try {
    return parse_model(io::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace spellnorm
