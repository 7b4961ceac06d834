#include "cner/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cner/error.hpp"
#include "cner/text_prep.hpp"
#include "util.hpp"

namespace cner {

void sort_spans(std::vector<Span>& spans) { std::sort(spans.begin(), spans.end()); }

void validate_spans(std::span<const Span> spans, std::span<const Sentence> sentences) {
  for (const auto& s : spans) {
    if (s.sentence_index >= sentences.size())
      throw Error("span refers to missing sentence " + std::to_string(s.sentence_index));
    if (!(s.start < s.end && s.end <= sentences[s.sentence_index].size()))
      throw Error("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                  ") is out of range in sentence " + std::to_string(s.sentence_index));
  }
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(), [](const Span& a, const Span& b) {
    return std::tie(a.event_type, a.sentence_index, a.start) <
           std::tie(b.event_type, b.sentence_index, b.start);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto& a = sorted[i - 1];
    const auto& b = sorted[i];
    if (a.event_type == b.event_type && a.overlaps(b))
      throw Error("overlapping " + a.event_type + " spans in sentence " +
                  std::to_string(a.sentence_index));
  }
}

void validate_spans(const Document& doc) { validate_spans(doc.gold_spans, doc.sentences); }

std::vector<Segment> segments_of(std::span<const Span> spans, std::size_t sentence_index,
                                 std::string_view event_type) {
  std::vector<Segment> out;
  for (const auto& s : spans)
    if (s.sentence_index == sentence_index && s.event_type == event_type)
      out.push_back({s.start, s.end});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> event_types_of(std::span<const Document> docs) {
  std::set<std::string> types;
  for (const auto& d : docs)
    for (const auto& s : d.gold_spans) types.insert(s.event_type);
  return {types.begin(), types.end()};
}

namespace {

enum class ColumnKind { surface, stem, pos, chunk, offsets, label };

struct Column {
  ColumnKind kind = ColumnKind::surface;
  TaggingScheme scheme = TaggingScheme::IOB;
  std::string event_type;  // empty for a joint label column
};

std::vector<Column> parse_columns(std::string_view spec, std::size_t line_no) {
  std::vector<Column> columns;
  std::set<ColumnKind> seen;
  for (auto name : detail::split_whitespace(spec)) {
    Column col;
    if (name == "surface") col.kind = ColumnKind::surface;
    else if (name == "stem") col.kind = ColumnKind::stem;
    else if (name == "pos") col.kind = ColumnKind::pos;
    else if (name == "chunk") col.kind = ColumnKind::chunk;
    else if (name == "offsets") col.kind = ColumnKind::offsets;
    else if (name.starts_with("label:")) {
      col.kind = ColumnKind::label;
      auto parts = detail::split(name, ':');
      if (parts.size() < 2 || parts.size() > 3)
        throw ParseError(line_no, "bad label column '" + std::string(name) + "'");
      auto scheme = parse_scheme(parts[1]);
      if (!scheme) throw ParseError(line_no, "unknown scheme '" + std::string(parts[1]) + "'");
      col.scheme = *scheme;
      if (parts.size() == 3) {
        if (parts[2].empty()) throw ParseError(line_no, "empty event type in label column");
        col.event_type = std::string(parts[2]);
      }
    } else {
      throw ParseError(line_no, "unknown column '" + std::string(name) + "'");
    }
    if (col.kind != ColumnKind::label && !seen.insert(col.kind).second)
      throw ParseError(line_no, "duplicate column '" + std::string(name) + "'");
    columns.push_back(std::move(col));
  }
  if (!seen.count(ColumnKind::surface)) throw ParseError(line_no, "columns lack 'surface'");
  return columns;
}

struct PendingSentence {
  Sentence sentence;
  std::size_t first_line = 0;
  bool has_offsets = false;
  // labels[column][token]
  std::vector<std::vector<std::string>> labels;
};

class ColumnReader {
 public:
  std::vector<Document> read(std::string_view text) {
    auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      line_no_ = i + 1;
      std::string_view line = lines[i];
      if (line.starts_with("#!")) {
        directive(line.substr(2));
      } else if (detail::trim(line).empty()) {
        flush_sentence();
      } else {
        data(line);
      }
    }
    flush_document();
    return std::move(docs_);
  }

 private:
  void directive(std::string_view body) {
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no_, "directive without '='");
    auto key = detail::trim(body.substr(0, eq));
    auto value = detail::trim(body.substr(eq + 1));
    if (key == "columns") {
      flush_sentence();
      columns_ = parse_columns(value, line_no_);
      have_columns_ = true;
    } else if (key == "doc") {
      flush_document();
      doc_ = Document{};
      doc_.id = std::string(value);
      doc_open_ = true;
      next_offset_ = 0;
    } else {
      throw ParseError(line_no_, "unknown directive '" + std::string(key) + "'");
    }
  }

  void data(std::string_view line) {
    if (!have_columns_) throw ParseError(line_no_, "data line before '#! columns' header");
    auto fields = detail::split(line, '\t');
    if (fields.size() != columns_.size())
      throw ParseError(line_no_, "expected " + std::to_string(columns_.size()) +
                                     " columns, found " + std::to_string(fields.size()));
    if (!doc_open_) {
      doc_ = Document{};
      doc_.id = "doc" + std::to_string(docs_.size());
      doc_open_ = true;
      next_offset_ = 0;
    }
    if (pending_.sentence.tokens.empty()) {
      pending_.first_line = line_no_;
      pending_.labels.assign(columns_.size(), {});
      pending_.has_offsets = false;
    }

    Token tok;
    bool have_stem = false, have_offsets = false;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      std::string value(fields[c]);
      switch (columns_[c].kind) {
        case ColumnKind::surface:
          if (value.empty() || value.find_first_of(" \t\r\n") != std::string::npos)
            throw ParseError(line_no_, "surface must be non-empty and free of whitespace");
          tok.surface = std::move(value);
          break;
        case ColumnKind::stem:
          tok.stem = value.empty() ? std::string(kNil) : std::move(value);
          have_stem = true;
          break;
        case ColumnKind::pos: tok.pos = value.empty() ? std::string(kNil) : std::move(value); break;
        case ColumnKind::chunk:
          tok.chunk = value.empty() ? std::string(kNil) : std::move(value);
          break;
        case ColumnKind::offsets: {
          auto parts = detail::split(value, '-');
          std::optional<std::size_t> a, b;
          if (parts.size() == 2) {
            a = detail::parse_int<std::size_t>(parts[0]);
            b = detail::parse_int<std::size_t>(parts[1]);
          }
          if (!a || !b || *a >= *b) throw ParseError(line_no_, "bad offsets '" + value + "'");
          tok.char_start = *a;
          tok.char_end = *b;
          have_offsets = true;
          break;
        }
        case ColumnKind::label: pending_.labels[c].push_back(std::move(value)); break;
      }
    }
    if (!have_stem) tok.stem = porter_stem(tok.surface);
    if (tok.pos.empty()) tok.pos = std::string(kNil);
    if (tok.chunk.empty()) tok.chunk = std::string(kNil);
    if (!have_offsets) {
      tok.char_start = next_offset_;
      tok.char_end = next_offset_ + tok.surface.size();
    }
    if (!pending_.sentence.tokens.empty() && tok.char_start < pending_.sentence.tokens.back().char_end)
      throw ParseError(line_no_, "token offsets overlap the previous token");
    next_offset_ = tok.char_end + 1;
    pending_.sentence.tokens.push_back(std::move(tok));
  }

  Label label_for(const std::string& raw, const Column& col, const std::string& type) const {
    std::string_view text = raw;
    if (text != "O") {
      auto dash = text.find('-');
      if (dash != std::string_view::npos) {
        if (text.substr(dash + 1) != type)
          throw ParseError(line_no_, "label '" + raw + "' does not belong to type " + type);
        text = text.substr(0, dash);
      } else if (col.event_type.empty()) {
        throw ParseError(line_no_, "joint label '" + raw + "' lacks a type suffix");
      }
    }
    auto label = parse_label(text);
    if (!label) throw ParseError(line_no_, "unknown label '" + raw + "'");
    return *label;
  }

  void flush_sentence() {
    if (pending_.sentence.tokens.empty()) return;
    const std::size_t sentence_index = doc_.sentences.size();
    const std::size_t n = pending_.sentence.size();
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Column& col = columns_[c];
      if (col.kind != ColumnKind::label) continue;

      std::vector<std::string> types;
      if (!col.event_type.empty()) {
        types.push_back(col.event_type);
      } else {
        std::set<std::string> seen;
        for (const auto& raw : pending_.labels[c]) {
          if (raw == "O") continue;
          auto dash = raw.find('-');
          if (dash == std::string::npos)
            throw ParseError(pending_.first_line, "joint label '" + raw + "' lacks a type suffix");
          seen.insert(raw.substr(dash + 1));
        }
        types.assign(seen.begin(), seen.end());
      }

      for (const auto& type : types) {
        LabelSequence seq(n, Label::O);
        for (std::size_t t = 0; t < n; ++t) {
          const std::string& raw = pending_.labels[c][t];
          if (col.event_type.empty() && raw != "O" && !raw.ends_with("-" + type)) continue;
          seq[t] = label_for(raw, col, type);
        }
        std::vector<Segment> segments;
        try {
          segments = decode(seq, col.scheme);
        } catch (const ValidityError& e) {
          throw ParseError(pending_.first_line + e.position(),
                           std::string(to_string(col.scheme)) + " violation for " + type + ": " +
                               e.rule());
        }
        for (const auto& s : segments) doc_.gold_spans.push_back({sentence_index, s.start, s.end, type});
      }
    }
    doc_.sentences.push_back(std::move(pending_.sentence));
    pending_ = PendingSentence{};
  }

  void flush_document() {
    flush_sentence();
    if (!doc_open_) return;
    sort_spans(doc_.gold_spans);
    try {
      validate_spans(doc_);
    } catch (const Error& e) {
      throw ParseError(line_no_, "document '" + doc_.id + "': " + e.what());
    }
    docs_.push_back(std::move(doc_));
    doc_ = Document{};
    doc_open_ = false;
  }

  std::vector<Document> docs_;
  Document doc_;
  bool doc_open_ = false;
  std::vector<Column> columns_;
  bool have_columns_ = false;
  PendingSentence pending_;
  std::size_t line_no_ = 0;
  std::size_t next_offset_ = 0;
};

std::string nil_if_empty(const std::string& s) { return s.empty() ? std::string(kNil) : s; }

}  // namespace

std::vector<Document> parse_column_file(std::string_view text) { return ColumnReader{}.read(text); }

std::string write_column_file(std::span<const Document> docs, TaggingScheme scheme,
                              const WriteOptions& options) {
  std::vector<std::string> types = options.event_types;
  if (types.empty()) types = event_types_of(docs);

  std::ostringstream out;
  out << "#! columns = surface offsets stem pos chunk";
  for (const auto& t : types) out << " label:" << to_string(scheme) << ':' << t;
  out << '\n';

  for (const auto& doc : docs) {
    validate_spans(doc);
    out << "#! doc = " << doc.id << '\n';
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      const Sentence& sentence = doc.sentences[si];
      if (sentence.tokens.empty()) continue;
      std::vector<LabelSequence> columns;
      for (const auto& t : types)
        columns.push_back(encode(segments_of(doc.gold_spans, si, t), sentence.size(), scheme));
      for (std::size_t k = 0; k < sentence.size(); ++k) {
        const Token& tok = sentence.tokens[k];
        out << tok.surface << '\t' << tok.char_start << '-' << tok.char_end << '\t'
            << nil_if_empty(tok.stem) << '\t' << nil_if_empty(tok.pos) << '\t'
            << nil_if_empty(tok.chunk);
        for (const auto& col : columns) out << '\t' << to_string(col[k]);
        out << '\n';
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string write_standoff(std::span<const Document> docs) {
  std::ostringstream out;
  for (const auto& doc : docs) {
    std::vector<Span> spans = doc.gold_spans;
    sort_spans(spans);
    for (const auto& s : spans)
      out << doc.id << '\t' << s.sentence_index << '\t' << s.start << '\t' << s.end << '\t'
          << s.event_type << '\n';
  }
  return out.str();
}

double TypeProfile::mean_length() const {
  double m = 0.0;
  for (std::size_t k = 1; k < length_histogram.size(); ++k) m += static_cast<double>(k) * length_histogram[k];
  return m;
}

CorpusProfile compute_profile(std::span<const Document> docs) {
  struct Acc {
    std::vector<std::size_t> lengths;
    std::set<std::string> distinct;
    std::size_t tokens = 0;
    std::size_t mentions = 0;
    std::size_t acronym_mentions = 0;
  };
  std::map<std::string, Acc> acc;
  std::size_t total = 0;

  for (const auto& doc : docs) {
    for (const auto& span : doc.gold_spans) {
      Acc& a = acc[span.event_type];
      const std::size_t len = span.length();
      if (a.lengths.size() <= len) a.lengths.resize(len + 1, 0);
      ++a.lengths[len];
      ++a.mentions;
      ++total;
      bool acronym = false;
      for (std::size_t k = span.start; k < span.end; ++k) {
        const auto& surface = doc.sentences[span.sentence_index].tokens[k].surface;
        a.distinct.insert(detail::to_lower(surface));
        ++a.tokens;
        if (token_case(surface) == TokenCase::allCaps) acronym = true;
      }
      if (acronym) ++a.acronym_mentions;
    }
  }

  CorpusProfile profile;
  for (const auto& [type, a] : acc) {
    TypeProfile p;
    const double m = static_cast<double>(a.mentions);
    p.length_histogram.assign(a.lengths.size(), 0.0);
    for (std::size_t k = 1; k < a.lengths.size(); ++k) p.length_histogram[k] = a.lengths[k] / m;
    p.unique_word_fraction = static_cast<double>(a.distinct.size()) / static_cast<double>(a.tokens);
    p.event_count = a.mentions;
    p.event_proportion = m / static_cast<double>(total);
    p.acronym_fraction = static_cast<double>(a.acronym_mentions) / m;
    profile.types.emplace(type, std::move(p));
  }
  return profile;
}

std::string format_profile(const CorpusProfile& profile) {
  std::ostringstream out;
  for (const auto& [type, p] : profile.types) {
    out << "type = " << type << '\n';
    out << "event_count = " << p.event_count << '\n';
    out << "event_proportion = " << detail::format_double(p.event_proportion) << '\n';
    out << "unique_word_fraction = " << detail::format_double(p.unique_word_fraction) << '\n';
    out << "acronym_fraction = " << detail::format_double(p.acronym_fraction) << '\n';
    out << "mean_length = " << detail::format_double(p.mean_length()) << '\n';
    for (std::size_t k = 1; k < p.length_histogram.size(); ++k)
      out << "length_" << k << " = " << detail::format_double(p.length_histogram[k]) << '\n';
    out << '\n';
  }
  return out.str();
}

}  // namespace cner
