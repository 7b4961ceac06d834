#include "cner/schemes.hpp"

#include <algorithm>

#include "cner/error.hpp"

namespace cner {

std::string_view to_string(TaggingScheme scheme) {
  switch (scheme) {
    case TaggingScheme::IO: return "IO";
    case TaggingScheme::IOB: return "IOB";
    case TaggingScheme::IOBW: return "IOBW";
    case TaggingScheme::IOBEW: return "IOBEW";
  }
  return "?";
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::O: return "O";
    case Label::B: return "B";
    case Label::I: return "I";
    case Label::E: return "E";
    case Label::W: return "W";
  }
  return "?";
}

std::optional<TaggingScheme> parse_scheme(std::string_view name) {
  for (auto s : {TaggingScheme::IO, TaggingScheme::IOB, TaggingScheme::IOBW, TaggingScheme::IOBEW})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view text) {
  for (auto l : {Label::O, Label::B, Label::I, Label::E, Label::W})
    if (to_string(l) == text) return l;
  return std::nullopt;
}

std::vector<Label> scheme_labels(TaggingScheme scheme) {
  switch (scheme) {
    case TaggingScheme::IO: return {Label::O, Label::I};
    case TaggingScheme::IOB: return {Label::O, Label::B, Label::I};
    case TaggingScheme::IOBW: return {Label::O, Label::B, Label::I, Label::W};
    case TaggingScheme::IOBEW: return {Label::O, Label::B, Label::I, Label::E, Label::W};
  }
  return {};
}

bool in_alphabet(TaggingScheme scheme, Label label) {
  auto labels = scheme_labels(scheme);
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

std::string format_labels(std::span<const Label> labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ' ';
    out += to_string(labels[i]);
  }
  return out;
}

namespace {

void write_segment(LabelSequence& out, const Segment& seg, TaggingScheme scheme) {
  const std::size_t len = seg.end - seg.start;
  switch (scheme) {
    case TaggingScheme::IO:
      std::fill(out.begin() + seg.start, out.begin() + seg.end, Label::I);
      break;
    case TaggingScheme::IOB:
      out[seg.start] = Label::B;
      std::fill(out.begin() + seg.start + 1, out.begin() + seg.end, Label::I);
      break;
    case TaggingScheme::IOBW:
      if (len == 1) {
        out[seg.start] = Label::W;
      } else {
        out[seg.start] = Label::B;
        std::fill(out.begin() + seg.start + 1, out.begin() + seg.end, Label::I);
      }
      break;
    case TaggingScheme::IOBEW:
      if (len == 1) {
        out[seg.start] = Label::W;
      } else {
        out[seg.start] = Label::B;
        std::fill(out.begin() + seg.start + 1, out.begin() + seg.end - 1, Label::I);
        out[seg.end - 1] = Label::E;
      }
      break;
  }
}

void check_segments(std::span<const Segment> segments, std::size_t length) {
  std::size_t prev_end = 0;
  for (const auto& s : segments) {
    if (s.start >= s.end || s.end > length)
      throw Error("segment [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                  ") is out of range for length " + std::to_string(length));
    if (s.start < prev_end) throw Error("segments overlap or are unsorted");
    prev_end = s.end;
  }
}

}  // namespace

LabelSequence encode(std::span<const Segment> segments, std::size_t length, TaggingScheme scheme) {
  check_segments(segments, length);
  LabelSequence out(length, Label::O);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (scheme == TaggingScheme::IO && k > 0 && segments[k - 1].end == segments[k].start)
      throw RepresentabilityError("IO cannot separate adjacent mentions at token " +
                                  std::to_string(segments[k].start));
    write_segment(out, segments[k], scheme);
  }
  return out;
}

LabelSequence encode_merging(std::span<const Segment> segments, std::size_t length,
                             TaggingScheme scheme) {
  if (scheme != TaggingScheme::IO) return encode(segments, length, scheme);
  check_segments(segments, length);
  LabelSequence out(length, Label::O);
  for (const auto& s : segments) write_segment(out, s, scheme);
  return out;
}

std::vector<Segment> decode(std::span<const Label> labels, TaggingScheme scheme) {
  std::vector<Segment> out;
  const std::size_t n = labels.size();
  bool open = false;
  std::size_t start = 0;

  auto fail = [](std::size_t pos, const std::string& rule) { throw ValidityError(pos, rule); };

  for (std::size_t t = 0; t < n; ++t) {
    Label l = labels[t];
    if (!in_alphabet(scheme, l))
      fail(t, std::string(to_string(l)) + " is not a " + std::string(to_string(scheme)) + " label");

    switch (l) {
      case Label::O:
        if (open) {
          if (scheme == TaggingScheme::IOBEW) fail(t, "B without E");
          if (scheme == TaggingScheme::IOBW && t - start == 1) fail(t - 1, "lone B");
          out.push_back({start, t});
          open = false;
        }
        break;
      case Label::B:
        if (open) {
          if (scheme == TaggingScheme::IOBEW) fail(t, "B without E");
          if (scheme == TaggingScheme::IOBW && t - start == 1) fail(t - 1, "lone B");
          out.push_back({start, t});
        }
        open = true;
        start = t;
        break;
      case Label::I:
        if (!open) {
          if (scheme != TaggingScheme::IO) fail(t, t == 0 ? "I at sentence start" : "I follows O");
          open = true;
          start = t;
        }
        break;
      case Label::E:
        if (!open) fail(t, "E outside a mention");
        out.push_back({start, t + 1});
        open = false;
        break;
      case Label::W:
        if (open) {
          if (scheme == TaggingScheme::IOBEW) fail(t, "B without E");
          if (scheme == TaggingScheme::IOBW && t - start == 1) fail(t - 1, "lone B");
          out.push_back({start, t});
          open = false;
        }
        out.push_back({t, t + 1});
        break;
    }
  }
  if (open) {
    if (scheme == TaggingScheme::IOBEW) fail(n, "B without E");
    if (scheme == TaggingScheme::IOBW && n - start == 1) fail(n - 1, "lone B");
    out.push_back({start, n});
  }
  return out;
}

bool is_valid(std::span<const Label> labels, TaggingScheme scheme) {
  try {
    decode(labels, scheme);
    return true;
  } catch (const ValidityError&) {
    return false;
  }
}

std::vector<Segment> lenient_decode(std::span<const Label> labels) {
  std::vector<Segment> out;
  bool open = false;
  std::size_t start = 0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    switch (labels[t]) {
      case Label::O:
        if (open) out.push_back({start, t});
        open = false;
        break;
      case Label::B:
        if (open) out.push_back({start, t});
        open = true;
        start = t;
        break;
      case Label::I:
        if (!open) {
          open = true;
          start = t;
        }
        break;
      case Label::E:
        if (!open) start = t;
        out.push_back({start, t + 1});
        open = false;
        break;
      case Label::W:
        if (open) out.push_back({start, t});
        out.push_back({t, t + 1});
        open = false;
        break;
    }
  }
  if (open) out.push_back({start, labels.size()});
  return out;
}

LabelSequence repair(std::span<const Label> labels, TaggingScheme scheme) {
  return encode_merging(lenient_decode(labels), labels.size(), scheme);
}

}  // namespace cner
