#include "cner/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "cner/error.hpp"
#include "util.hpp"

namespace cner {

std::string_view to_string(MatchMode mode) { return mode == MatchMode::strict ? "strict" : "lenient"; }

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
  tp_system += other.tp_system;
  tp_gold += other.tp_gold;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

namespace {

void check_no_overlap(std::span<const Span> spans, std::string_view side) {
  for (std::size_t i = 0; i < spans.size(); ++i)
    for (std::size_t j = i + 1; j < spans.size(); ++j)
      if (spans[i].event_type == spans[j].event_type && spans[i].overlaps(spans[j]))
        throw Error(std::string(side) + " spans overlap: [" + std::to_string(spans[i].start) + "," +
                    std::to_string(spans[i].end) + ") and [" + std::to_string(spans[j].start) +
                    "," + std::to_string(spans[j].end) + ")");
}

bool same_type_overlap(const Span& a, const Span& b) {
  return a.event_type == b.event_type && a.overlaps(b);
}

}  // namespace

MatchCounts match_spans(std::span<const Span> gold, std::span<const Span> system, MatchMode mode) {
  check_no_overlap(gold, "gold");
  check_no_overlap(system, "system");

  MatchCounts counts;
  counts.mode = mode;
  std::set<std::string> types;
  for (const auto& s : gold) types.insert(s.event_type);
  for (const auto& s : system) types.insert(s.event_type);
  if (types.size() == 1) counts.event_type = *types.begin();

  if (mode == MatchMode::strict) {
    std::vector<bool> used(gold.size(), false);
    for (const auto& s : system) {
      for (std::size_t g = 0; g < gold.size(); ++g) {
        if (!used[g] && gold[g] == s) {
          used[g] = true;
          ++counts.tp_system;
          break;
        }
      }
    }
    counts.tp_gold = counts.tp_system;
  } else {
    for (const auto& s : system)
      if (std::any_of(gold.begin(), gold.end(), [&](const Span& g) { return same_type_overlap(g, s); }))
        ++counts.tp_system;
    for (const auto& g : gold)
      if (std::any_of(system.begin(), system.end(), [&](const Span& s) { return same_type_overlap(g, s); }))
        ++counts.tp_gold;
  }
  counts.fp = system.size() - counts.tp_system;
  counts.fn = gold.size() - counts.tp_gold;
  return counts;
}

Scores f1_report(const MatchCounts& counts) {
  Scores s;
  const auto sys = counts.tp_system + counts.fp;
  const auto gold = counts.tp_gold + counts.fn;
  s.precision = sys ? static_cast<double>(counts.tp_system) / static_cast<double>(sys) : 0.0;
  s.recall = gold ? static_cast<double>(counts.tp_gold) / static_cast<double>(gold) : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

Scores EvalReport::scores(const std::string& event_type, MatchMode mode) const {
  auto it = counts.find({event_type, mode});
  return it == counts.end() ? Scores{} : f1_report(it->second);
}

std::string EvalReport::format() const {
  std::ostringstream out;
  out << "# lenient = side-wise any-overlap; micro average over types as " << kMicroAverage << '\n';
  out << std::left << std::setw(12) << "type" << std::setw(9) << "mode" << std::right
      << std::setw(8) << "tp_sys" << std::setw(8) << "tp_gold" << std::setw(7) << "fp"
      << std::setw(7) << "fn" << std::setw(11) << "precision" << std::setw(9) << "recall"
      << std::setw(9) << "f1" << '\n';
  for (const auto& [key, c] : counts) {
    auto s = f1_report(c);
    out << std::left << std::setw(12) << key.first << std::setw(9) << to_string(key.second)
        << std::right << std::setw(8) << c.tp_system << std::setw(8) << c.tp_gold << std::setw(7)
        << c.fp << std::setw(7) << c.fn << std::setw(11) << detail::format_fixed(s.precision, 4)
        << std::setw(9) << detail::format_fixed(s.recall, 4) << std::setw(9)
        << detail::format_fixed(s.f1, 4) << '\n';
  }
  out << '\n';
  for (const auto& [key, c] : counts) {
    auto s = f1_report(c);
    out << key.first << '\t' << to_string(key.second) << '\t' << detail::format_double(s.precision)
        << '\t' << detail::format_double(s.recall) << '\t' << detail::format_double(s.f1) << '\n';
  }
  return out.str();
}

EvalReport evaluate(std::span<const Document> gold, std::span<const Document> system,
                    std::vector<std::string> event_types) {
  if (gold.size() != system.size())
    throw Error("gold has " + std::to_string(gold.size()) + " documents, system has " +
                std::to_string(system.size()));
  for (std::size_t d = 0; d < gold.size(); ++d)
    if (gold[d].id != system[d].id)
      throw Error("document " + std::to_string(d) + " differs: '" + gold[d].id + "' vs '" +
                  system[d].id + "'");

  if (event_types.empty()) {
    auto g = event_types_of(gold);
    auto s = event_types_of(system);
    std::set<std::string> all(g.begin(), g.end());
    all.insert(s.begin(), s.end());
    event_types.assign(all.begin(), all.end());
  }

  EvalReport report;
  for (MatchMode mode : {MatchMode::strict, MatchMode::lenient}) {
    MatchCounts total;
    total.mode = mode;
    total.event_type = std::string(kMicroAverage);
    for (const auto& type : event_types) {
      MatchCounts sum;
      sum.mode = mode;
      sum.event_type = type;
      for (std::size_t d = 0; d < gold.size(); ++d) {
        std::vector<Span> g, s;
        for (const auto& span : gold[d].gold_spans)
          if (span.event_type == type) g.push_back(span);
        for (const auto& span : system[d].gold_spans)
          if (span.event_type == type) s.push_back(span);
        sum += match_spans(g, s, mode);
      }
      total += sum;
      report.counts[{type, mode}] = sum;
    }
    report.counts[{std::string(kMicroAverage), mode}] = total;
  }
  return report;
}

}  // namespace cner
