#include "cner/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "cner/error.hpp"
#include "cner/stats.hpp"
#include "cner/text_prep.hpp"
#include "util.hpp"

namespace cner {

std::vector<double> truncated_geometric_lengths(double p1, double ratio) {
  constexpr std::size_t kMaxLength = 6;
  std::vector<double> out(kMaxLength + 1, 0.0);
  out[1] = p1;
  double tail = 0.0;
  for (std::size_t k = 2; k <= kMaxLength; ++k) tail += std::pow(ratio, static_cast<double>(k - 2));
  for (std::size_t k = 2; k <= kMaxLength; ++k)
    out[k] = (1.0 - p1) * std::pow(ratio, static_cast<double>(k - 2)) / tail;
  return out;
}

SynthProfile default_profile() {
  SynthProfile p;
  auto add = [&](const std::string& type, double proportion, double unique, double acronym,
                 double single, double determiner) {
    SynthTypeProfile t;
    t.event_proportion = proportion;
    t.unique_word_fraction = unique;
    t.acronym_fraction = acronym;
    t.length_distribution = truncated_geometric_lengths(single);
    t.determiner_rate = determiner;
    p.types[type] = t;
  };
  // proportion, unique-word fraction, acronym share, single-token share, determiner rate
  add("PROBLEM", 0.3293, 0.55, 0.09, 0.35, 0.25);
  add("TEST", 0.1683, 0.37, 0.24, 0.55, 0.25);
  add("TREATMENT", 0.2511, 0.43, 0.11, 0.45, 0.25);
  add("OCCURRENCE", 0.2042, 0.30, 0.01, 0.70, 0.0);
  add("EVIDENTIAL", 0.0471, 0.10, 0.0, 0.96, 0.0);
  return p;
}

void validate_profile(const SynthProfile& profile) {
  auto prob = [](double v, const std::string& what) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(what + " must lie in [0,1]");
  };
  if (profile.types.empty()) throw Error("synthetic profile has no event types");
  if (profile.background_lexicon_size == 0) throw Error("background lexicon is empty");
  if (profile.min_sentence_background == 0 ||
      profile.min_sentence_background > profile.max_sentence_background)
    throw Error("bad sentence background range");
  if (profile.min_sentences_per_doc == 0 || profile.min_sentences_per_doc > profile.max_sentences_per_doc)
    throw Error("bad sentences-per-document range");
  if (!(profile.events_per_sentence >= 0.0)) throw Error("events_per_sentence must be >= 0");
  prob(profile.pos_noise, "pos_noise");
  prob(profile.adjacent_rate, "adjacent_rate");
  prob(profile.background_determiner_rate, "background_determiner_rate");

  double total = 0.0;
  for (const auto& [type, t] : profile.types) {
    prob(t.event_proportion, type + " event_proportion");
    prob(t.acronym_fraction, type + " acronym_fraction");
    prob(t.determiner_rate, type + " determiner_rate");
    prob(t.trigger_rate, type + " trigger_rate");
    if (!(t.unique_word_fraction > 0.0 && t.unique_word_fraction <= 1.0))
      throw Error(type + " unique_word_fraction must lie in (0,1]");
    if (t.length_distribution.size() < 2) throw Error(type + " has no length distribution");
    if (t.length_distribution[0] != 0.0) throw Error(type + " length 0 must have probability 0");
    double s = 0.0;
    for (double v : t.length_distribution) {
      prob(v, type + " length probability");
      s += v;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw Error(type + " length distribution does not sum to 1");
    total += t.event_proportion;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw Error("event proportions do not sum to 1");
}

SynthProfile parse_synth_profile(std::string_view text) {
  SynthProfile p;
  p.types.clear();
  SynthTypeProfile* current = nullptr;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = detail::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    auto number = [&]() {
      auto v = detail::parse_double(value);
      if (!v) throw ParseError(line_no, "'" + std::string(key) + "' needs a number");
      return *v;
    };
    auto count = [&]() {
      auto v = detail::parse_int<std::size_t>(value);
      if (!v) throw ParseError(line_no, "'" + std::string(key) + "' needs a count");
      return *v;
    };

    if (key == "type") {
      current = &p.types[std::string(value)];
      *current = SynthTypeProfile{};
    } else if (current) {
      if (key == "event_proportion") current->event_proportion = number();
      else if (key == "unique_word_fraction") current->unique_word_fraction = number();
      else if (key == "acronym_fraction") current->acronym_fraction = number();
      else if (key == "determiner_rate") current->determiner_rate = number();
      else if (key == "trigger_rate") current->trigger_rate = number();
      else if (key == "length") {
        current->length_distribution = {0.0};
        for (auto v : detail::split(value, ',')) {
          auto d = detail::parse_double(detail::trim(v));
          if (!d) throw ParseError(line_no, "bad length probability");
          current->length_distribution.push_back(*d);
        }
      } else {
        throw ParseError(line_no, "unknown type key '" + std::string(key) + "'");
      }
    } else if (key == "background_lexicon_size") p.background_lexicon_size = count();
    else if (key == "min_sentence_background") p.min_sentence_background = count();
    else if (key == "max_sentence_background") p.max_sentence_background = count();
    else if (key == "min_sentences_per_doc") p.min_sentences_per_doc = count();
    else if (key == "max_sentences_per_doc") p.max_sentences_per_doc = count();
    else if (key == "events_per_sentence") p.events_per_sentence = number();
    else if (key == "pos_noise") p.pos_noise = number();
    else if (key == "adjacent_rate") p.adjacent_rate = number();
    else if (key == "background_determiner_rate") p.background_determiner_rate = number();
    else if (key == "triggers_per_type") p.triggers_per_type = count();
    else throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
  }
  validate_profile(p);
  return p;
}

std::string format_synth_profile(const SynthProfile& p) {
  std::ostringstream out;
  out << "background_lexicon_size = " << p.background_lexicon_size << '\n'
      << "min_sentence_background = " << p.min_sentence_background << '\n'
      << "max_sentence_background = " << p.max_sentence_background << '\n'
      << "min_sentences_per_doc = " << p.min_sentences_per_doc << '\n'
      << "max_sentences_per_doc = " << p.max_sentences_per_doc << '\n'
      << "events_per_sentence = " << detail::format_double(p.events_per_sentence) << '\n'
      << "pos_noise = " << detail::format_double(p.pos_noise) << '\n'
      << "adjacent_rate = " << detail::format_double(p.adjacent_rate) << '\n'
      << "background_determiner_rate = " << detail::format_double(p.background_determiner_rate)
      << '\n'
      << "triggers_per_type = " << p.triggers_per_type << '\n';
  for (const auto& [type, t] : p.types) {
    out << "\ntype = " << type << '\n'
        << "event_proportion = " << detail::format_double(t.event_proportion) << '\n'
        << "unique_word_fraction = " << detail::format_double(t.unique_word_fraction) << '\n'
        << "acronym_fraction = " << detail::format_double(t.acronym_fraction) << '\n'
        << "determiner_rate = " << detail::format_double(t.determiner_rate) << '\n'
        << "trigger_rate = " << detail::format_double(t.trigger_rate) << '\n'
        << "length = ";
    for (std::size_t k = 1; k < t.length_distribution.size(); ++k)
      out << (k > 1 ? ", " : "") << detail::format_double(t.length_distribution[k]);
    out << '\n';
  }
  return out.str();
}

namespace {

constexpr std::string_view kConsonants = "bcdfghjklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

// Distinct lowercase pseudo-word for every index; always two or more syllables.
std::string make_word(std::size_t index) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::size_t v = index + base;
  std::string out;
  while (v > 0) {
    const std::size_t syl = v % base;
    out.insert(0, {kConsonants[syl / kVowels.size()], kVowels[syl % kVowels.size()]});
    v /= base;
  }
  return out;
}

// Distinct upper-case consonant string of length >= 2; never equal to a word.
std::string make_acronym(std::size_t index) {
  const std::size_t base = kConsonants.size();
  std::size_t v = index + base;
  std::string out;
  while (v > 0) {
    out.insert(out.begin(), static_cast<char>(kConsonants[v % base] - 'a' + 'A'));
    v /= base;
  }
  return out;
}

struct BackgroundWord {
  std::string surface;
  std::string pos;
  std::string chunk;
};

const std::vector<std::pair<std::string, std::string>>& background_tags() {
  static const std::vector<std::pair<std::string, std::string>> tags{
      {"VBD", "B-VP"}, {"IN", "B-PP"}, {"RB", "O"},    {"JJ", "B-ADJP"}, {"VBN", "B-VP"},
      {"CC", "O"},     {"TO", "B-PP"}, {"VBZ", "B-VP"}, {"MD", "B-VP"},  {"IN", "B-PP"}};
  return tags;
}

const std::vector<std::pair<std::string, std::string>>& determiners() {
  static const std::vector<std::pair<std::string, std::string>> d{
      {"the", "DT"}, {"a", "DT"}, {"this", "DT"}, {"her", "PRP$"}, {"his", "PRP$"}, {"their", "PRP$"}};
  return d;
}

struct TypeState {
  std::vector<std::string> words;     // content words used so far
  std::vector<std::string> acronyms;  // acronyms used so far
  std::set<std::string> distinct;     // lowercased mention tokens
  std::size_t tokens = 0;
};

class Generator {
 public:
  Generator(const SynthProfile& profile, std::uint64_t seed) : p_(profile), rng_(seed) {
    for (const auto& [type, t] : p_.types) {
      type_names_.push_back(type);
      cumulative_.push_back((cumulative_.empty() ? 0.0 : cumulative_.back()) + t.event_proportion);
    }
    for (std::size_t i = 0; i < p_.background_lexicon_size; ++i) {
      const auto& tag = background_tags()[i % background_tags().size()];
      background_.push_back({make_word(next_word_++), tag.first, tag.second});
    }
    for (const auto& type : type_names_)
      for (std::size_t i = 0; i < p_.triggers_per_type; ++i)
        triggers_[type].push_back({make_word(next_word_++), i % 2 ? "IN" : "VBD", i % 2 ? "B-PP" : "B-VP"});
  }

  Document document(std::size_t index) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "synth%05zu", index);
    doc.id = id;
    const std::size_t n_sentences = uniform_between(p_.min_sentences_per_doc, p_.max_sentences_per_doc);
    std::size_t offset = 0;
    for (std::size_t s = 0; s < n_sentences; ++s) sentence(doc, offset);
    return doc;
  }

 private:
  std::size_t uniform_between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng_.below(hi - lo + 1));
  }

  std::size_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double prod = rng_.uniform();
    while (prod > limit) {
      ++k;
      prod *= rng_.uniform();
    }
    return k;
  }

  const std::string& draw_type() {
    const double u = rng_.uniform() * cumulative_.back();
    for (std::size_t i = 0; i < cumulative_.size(); ++i)
      if (u < cumulative_[i]) return type_names_[i];
    return type_names_.back();
  }

  std::size_t draw_length(const SynthTypeProfile& t) {
    double u = rng_.uniform();
    for (std::size_t k = 1; k < t.length_distribution.size(); ++k) {
      u -= t.length_distribution[k];
      if (u < 0.0) return k;
    }
    return t.length_distribution.size() - 1;
  }

  Token make_token(std::string surface, std::string pos, std::string chunk) {
    Token tok;
    tok.stem = porter_stem(surface);
    tok.surface = std::move(surface);
    tok.pos = std::move(pos);
    tok.chunk = std::move(chunk);
    return tok;
  }

  // Fresh word while the type's distinct/total ratio is at or below target.
  std::string content_word(TypeState& st, const SynthTypeProfile& t, bool acronym) {
    auto& pool = acronym ? st.acronyms : st.words;
    const bool fresh = pool.empty() || static_cast<double>(st.distinct.size()) <
                                           t.unique_word_fraction * static_cast<double>(st.tokens + 1);
    if (fresh) {
      pool.push_back(acronym ? make_acronym(next_acronym_++) : make_word(next_word_++));
      return pool.back();
    }
    return pool[rng_.below(pool.size())];
  }

  std::vector<Token> mention(const std::string& type) {
    const SynthTypeProfile& t = p_.types.at(type);
    TypeState& st = state_[type];
    const std::size_t len = draw_length(t);
    const bool det = len >= 2 && rng_.bernoulli(t.determiner_rate);
    const bool acronym = rng_.bernoulli(t.acronym_fraction);

    std::vector<Token> out;
    for (std::size_t k = 0; k < len; ++k) {
      const char* chunk = k == 0 ? "B-NP" : "I-NP";
      if (k == 0 && det) {
        const auto& d = determiners()[rng_.below(determiners().size())];
        out.push_back(make_token(d.first, d.second, chunk));
      } else if (acronym && k + 1 == len) {
        out.push_back(make_token(content_word(st, t, true), "NNP", chunk));
      } else {
        std::string pos = rng_.bernoulli(p_.pos_noise) ? "JJ" : "NN";
        out.push_back(make_token(content_word(st, t, false), pos, chunk));
      }
      st.distinct.insert(detail::to_lower(out.back().surface));
      ++st.tokens;
    }
    return out;
  }

  Token background_token() {
    if (rng_.bernoulli(p_.background_determiner_rate)) {
      const auto& d = determiners()[rng_.below(determiners().size())];
      return make_token(d.first, d.second, "B-NP");
    }
    const std::uint64_t roll = rng_.below(20);
    if (roll == 0) return make_token(",", ",", "O");
    if (roll == 1) return make_token(std::to_string(1 + rng_.below(200)), "CD", "O");
    const auto& w = background_[rng_.below(background_.size())];
    return make_token(w.surface, w.pos, w.chunk);
  }

  void sentence(Document& doc, std::size_t& offset) {
    const std::size_t n_background = uniform_between(p_.min_sentence_background, p_.max_sentence_background);
    const std::size_t n_events = std::min(poisson(p_.events_per_sentence), n_background + 1);

    // Events grouped by gap; a group holds same-type mentions placed back to back.
    std::vector<std::size_t> slots(n_background + 1);
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
    shuffle(slots, rng_);
    std::vector<std::vector<std::string>> groups(n_background + 1);
    std::size_t used = 0;
    std::string previous_type;
    std::size_t previous_slot = 0;
    for (std::size_t e = 0; e < n_events; ++e) {
      if (e > 0 && rng_.bernoulli(p_.adjacent_rate)) {
        groups[previous_slot].push_back(previous_type);
        continue;
      }
      if (used >= slots.size()) break;
      previous_slot = slots[used++];
      previous_type = draw_type();
      groups[previous_slot].push_back(previous_type);
    }

    Sentence sentence;
    const std::size_t sentence_index = doc.sentences.size();
    for (std::size_t gap = 0; gap <= n_background; ++gap) {
      if (gap > 0 && !groups[gap].empty()) {
        const auto& type = groups[gap].front();
        const auto& cues = triggers_[type];
        if (!cues.empty() && rng_.bernoulli(p_.types.at(type).trigger_rate)) {
          const auto& w = cues[rng_.below(cues.size())];
          sentence.tokens.back() = make_token(w.surface, w.pos, w.chunk);
        }
      }
      for (const auto& type : groups[gap]) {
        auto tokens = mention(type);
        const std::size_t start = sentence.tokens.size();
        for (auto& tok : tokens) sentence.tokens.push_back(std::move(tok));
        doc.gold_spans.push_back({sentence_index, start, sentence.tokens.size(), type});
      }
      if (gap < n_background) sentence.tokens.push_back(background_token());
    }
    sentence.tokens.push_back(make_token(".", ".", "O"));

    for (auto& tok : sentence.tokens) {
      tok.char_start = offset;
      tok.char_end = offset + tok.surface.size();
      offset = tok.char_end + 1;
    }
    doc.sentences.push_back(std::move(sentence));
  }

  const SynthProfile& p_;
  SplitMix64 rng_;
  std::vector<std::string> type_names_;
  std::vector<double> cumulative_;
  std::vector<BackgroundWord> background_;
  std::map<std::string, std::vector<BackgroundWord>> triggers_;
  std::map<std::string, TypeState> state_;
  std::size_t next_word_ = 0;
  std::size_t next_acronym_ = 0;
};

}  // namespace

std::vector<Document> generate(const SynthProfile& profile, std::uint64_t seed,
                               std::size_t n_documents) {
  validate_profile(profile);
  Generator gen(profile, seed);
  std::vector<Document> docs;
  docs.reserve(n_documents);
  for (std::size_t i = 0; i < n_documents; ++i) docs.push_back(gen.document(i));
  return docs;
}

}  // namespace cner
