#pragma once

// Command-line frontend. run_cli is kept separate from main() so the test
// suite can drive every subcommand in-process.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cadyn/cadyn.hpp"

namespace cadyn::cli {

struct Window {
  long long i1 = 0;
  long long i2 = 0;
};

inline Window parse_window(const std::string& text) {
  auto sep = text.find_first_of(",:");
  if (sep == std::string::npos) throw ParseError("window must be written i1,i2");
  Window w{detail::parse_int(std::string_view(text).substr(0, sep), "window bound"),
           detail::parse_int(std::string_view(text).substr(sep + 1), "window bound")};
  if (w.i1 > w.i2) throw PreconditionError("window: i1 must not exceed i2");
  return w;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto part : detail::split(text, ','))
    if (!part.empty()) out.emplace_back(part);
  return out;
}

inline json word_json(const Alphabet& a, const Word& w) { return a.format(w); }

inline json surjectivity_json(const LocalRule& rule, const SurjectivityReport& r) {
  json j{{"surjective", r.surjective}, {"checked_balance_lengths", r.checked_balance_lengths}};
  j["orphan"] = r.orphan ? json(rule.alphabet().format(*r.orphan)) : json(nullptr);
  if (r.orphan) j["orphan_preimages"] = count_preimages(rule, *r.orphan);
  return j;
}

inline json diamond_json(const Alphabet& a, const Diamond& d) {
  return json{{"w", a.format(d.boundary)}, {"u", a.format(d.first)}, {"v", a.format(d.second)}};
}

inline json injectivity_json(const LocalRule& rule, const InjectivityReport& r) {
  json j{{"injective", r.injective}};
  j["diamond"] = r.diamond ? diamond_json(rule.alphabet(), *r.diamond) : json(nullptr);
  if (r.collision) {
    j["collision"] = {rule.alphabet().format(r.collision->first.period_word()),
                      rule.alphabet().format(r.collision->second.period_word())};
  } else {
    j["collision"] = nullptr;
  }
  return j;
}

inline json verdict_json(const Alphabet& a, const BlockingVerdict& v) {
  return std::visit(
      [&](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Certified>) {
          json cols = json::array();
          for (const auto& c : x.column_words) cols.push_back(a.format(c));
          return {{"verdict", "Certified"}, {"preperiod", x.preperiod}, {"period", x.period}, {"column_words", cols}};
        } else if constexpr (std::is_same_v<T, Refuted>) {
          return {{"verdict", "Refuted"},
                  {"step", x.step},
                  {"cone_start", x.cone_start},
                  {"extensions", {a.format(x.first_extension), a.format(x.second_extension)}},
                  {"columns", {a.format(x.first_column), a.format(x.second_column)}}};
        } else {
          return {{"verdict", "Inconclusive"}, {"steps_used", x.steps_used}, {"budget", x.budget}, {"reason", x.reason}};
        }
      },
      v);
}

inline json hit_json(const Alphabet& a, const BlockingHit& h) {
  return {{"word", a.format(h.word)},
          {"offset", h.offset},
          {"preperiod", h.certificate.preperiod},
          {"period", h.certificate.period}};
}

inline json classification_json(const Alphabet& a, const KurkaClassification& c) {
  json j{{"class", to_string(c.kind)}};
  if (c.kind == KurkaClass::EquicontinuousCertified) {
    j["m"] = c.map_preperiod;
    j["p"] = c.map_period;
  }
  if (c.blocking_word) j["blocking_word"] = hit_json(a, *c.blocking_word);
  return j;
}

inline std::string text_of(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

struct Options {
  std::string rule_source;
  std::size_t max_len = 4;
  std::size_t max_steps = 64;
  std::size_t budget = 1'000'000;
  bool as_json = false;
  std::uint64_t seed = 0;
  std::string format = "ascii";
};

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cadyn: topological dynamics of one-dimensional cellular automata"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_rule) {
    auto* r = sub->add_option("--rule", o.rule_source, "rule file path, eca:N, tab:K:M:A:N or zoo:NAME");
    if (needs_rule) r->required();
    sub->add_option("--max-len", o.max_len, "maximum word length for searches");
    sub->add_option("--max-steps", o.max_steps, "step budget for blocking analysis");
    sub->add_option("--budget", o.budget, "table / orbit budget");
    sub->add_flag("--json", o.as_json, "machine-readable output");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--format", o.format, "ascii or pgm")->check(CLI::IsMember({"ascii", "pgm"}));
  };

  auto* analyze = app.add_subcommand("analyze", "surjectivity, injectivity, classification and blocking words");
  add_common(analyze, true);
  auto* surjective = app.add_subcommand("surjective", "decide surjectivity");
  add_common(surjective, true);
  auto* injective = app.add_subcommand("injective", "decide injectivity");
  add_common(injective, true);
  std::optional<std::size_t> diamond_len;
  injective->add_option("--diamond-len", diamond_len, "also search diamonds with |u| up to this bound");

  auto* blocking = app.add_subcommand("blocking", "certify or refute blocking words");
  add_common(blocking, true);
  std::string word_text;
  std::optional<std::size_t> width, offset;
  std::size_t margin = 0;
  blocking->add_option("--word", word_text, "word to check; omit to search all words");
  blocking->add_option("--s", width, "column width s (default: radius)");
  blocking->add_option("--offset", offset, "column offset p (default: all)");
  blocking->add_option("--margin", margin, "abstract window margin");

  std::string config_text, window_text;
  std::size_t phase = 0;
  auto* trace = app.add_subcommand("trace", "orbit and column trace of a spatially periodic point");
  add_common(trace, true);
  trace->add_option("--config", config_text, "period word")->required();
  trace->add_option("--phase", phase, "index of the letter at coordinate 0");
  trace->add_option("--window", window_text, "i1,i2")->required();

  auto* factor = app.add_subcommand("factor", "periodic factor from a column trace");
  add_common(factor, true);
  std::size_t verify_bound = 6;
  factor->add_option("--config", config_text, "period word")->required();
  factor->add_option("--phase", phase, "index of the letter at coordinate 0");
  factor->add_option("--window", window_text, "i1,i2")->required();
  factor->add_option("--verify-bound", verify_bound, "verify on all cyclic points of period <= bound");

  auto* spectrum = app.add_subcommand("spectrum", "factor periods over embedded periodic points");
  add_common(spectrum, true);
  std::string x_center, y_symbols;
  std::size_t y_max_len = 4;
  spectrum->add_option("--x-center", x_center, "central word of the blocking word")->required();
  spectrum->add_option("--y-symbols", y_symbols, "symbols y ranges over (default: whole alphabet)");
  spectrum->add_option("--y-max-len", y_max_len, "maximum length of y");
  spectrum->add_option("--window", window_text, "i1,i2 (default: -r,r)");

  auto* scan = app.add_subcommand("scan", "enumerate a rule space and filter by predicates");
  add_common(scan, false);
  std::string space_text = "eca", require_text;
  std::optional<std::size_t> sample;
  std::size_t scan_s = 1, map_period = 8;
  scan->add_option("--space", space_text, "eca or K:M:A");
  scan->add_option("--require", require_text, "comma list of surjective,injective,blocking,non-periodic");
  scan->add_option("--s", scan_s, "blocking width");
  scan->add_option("--map-period", map_period, "bound for the eventual-periodicity certificate");
  scan->add_option("--sample", sample, "sample this many rules instead of enumerating");

  auto* spacetime = app.add_subcommand("spacetime", "render a space-time diagram");
  add_common(spacetime, true);
  std::size_t steps = 16, max_width = 4096;
  std::string palette, output;
  spacetime->add_option("--config", config_text, "period word")->required();
  spacetime->add_option("--phase", phase, "index of the letter at coordinate 0");
  spacetime->add_option("--steps", steps, "number of steps")->check(CLI::PositiveNumber);
  spacetime->add_option("--window", window_text, "i1,i2 (default: one period)");
  spacetime->add_option("--palette", palette, "one display character per symbol");
  spacetime->add_option("--max-width", max_width, "refuse wider windows");
  spacetime->add_option("--output", output, "write to this file instead of stdout");

  auto* zoo_cmd = app.add_subcommand("zoo", "list built-in rules");
  add_common(zoo_cmd, false);

  std::vector<std::string> argv_store{"cadyn"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    auto emit = [&](const json& j, const std::vector<std::string>& lines) {
      if (o.as_json) {
        out << j.dump(2) << "\n";
      } else {
        for (const auto& l : lines) out << l << "\n";
      }
    };

    if (*zoo_cmd) {
      json j = json::array();
      std::vector<std::string> lines;
      for (const auto& e : zoo()) {
        j.push_back({{"name", e.name},
                     {"description", e.description},
                     {"surjective", e.surjective},
                     {"injective", e.injective},
                     {"blocking_word", e.blocking_word ? json(*e.blocking_word) : json(nullptr)},
                     {"classification", e.classification},
                     {"rule", rule_to_json(e.rule)}});
        lines.push_back("zoo:" + e.name + "  " + e.description);
      }
      emit(j, lines);
      return 0;
    }

    if (*scan) {
      ScanPredicates pred;
      pred.blocking_max_len = o.max_len;
      pred.blocking_steps = o.max_steps;
      pred.table_budget = o.budget;
      for (const auto& r : split_list(require_text)) {
        if (r == "surjective") pred.surjective = true;
        else if (r == "injective") pred.injective = true;
        else if (r == "blocking") pred.blocking_width = scan_s;
        else if (r == "non-periodic") pred.not_eventually_periodic = map_period;
        else throw ParseError("unknown predicate '" + r + "'");
      }
      const auto space = parse_rule_space(space_text);
      auto hits = scan_rules(space, pred, sample, o.seed);
      json j = json::array();
      std::vector<std::string> lines;
      const auto alphabet = Alphabet::digits(space.k);
      for (const auto& h : hits) {
        json e{{"rule", h.name}};
        std::string line = h.name;
        if (h.blocking) {
          e["blocking_word"] = hit_json(alphabet, *h.blocking);
          line += " blocking=" + alphabet.format(h.blocking->word) + "@" + std::to_string(h.blocking->offset);
        }
        j.push_back(e);
        lines.push_back(line);
      }
      lines.push_back("matches: " + std::to_string(hits.size()));
      emit(json{{"space", space_text}, {"matches", j}, {"count", hits.size()}}, lines);
      return 0;
    }

    const auto rule = resolve_rule(o.rule_source);
    const auto& abc = rule.alphabet();
    const auto default_s = static_cast<std::size_t>(std::max(rule.radius(), 1));

    if (*surjective) {
      auto j = surjectivity_json(rule, is_surjective(rule));
      emit(j, {"surjective: " + text_of(j["surjective"]), "orphan: " + text_of(j["orphan"])});
      return 0;
    }

    if (*injective) {
      auto j = injectivity_json(rule, is_injective(rule));
      if (diamond_len) {
        auto d = find_diamond(rule, *diamond_len);
        j["bounded_diamond"] = d ? diamond_json(abc, *d) : json(nullptr);
      }
      std::vector<std::string> lines{"injective: " + text_of(j["injective"]), "diamond: " + text_of(j["diamond"]),
                                     "collision: " + text_of(j["collision"])};
      if (diamond_len) lines.push_back("bounded diamond: " + text_of(j["bounded_diamond"]));
      emit(j, lines);
      return 0;
    }

    if (*analyze) {
      KurkaBudgets budgets;
      budgets.max_len = o.max_len;
      budgets.max_steps = o.max_steps;
      budgets.table_budget = o.budget;
      auto surj = surjectivity_json(rule, is_surjective(rule));
      auto inj = injectivity_json(rule, is_injective(rule));
      auto cls = classify_kurka(rule, budgets);
      auto cls_json = classification_json(abc, cls);
      auto words = find_blocking_words(rule, default_s, o.max_len, o.max_steps);
      json hits = json::array();
      for (const auto& h : words) hits.push_back(hit_json(abc, h));
      json j{{"rule", o.rule_source},
             {"surjectivity", surj},
             {"injectivity", inj},
             {"classification", cls_json},
             {"blocking_words", hits}};
      std::vector<std::string> lines{
          "rule: " + o.rule_source,
          "surjective: " + text_of(surj["surjective"]) + " orphan: " + text_of(surj["orphan"]),
          "injective: " + text_of(inj["injective"]) + " diamond: " + text_of(inj["diamond"]) +
              " collision: " + text_of(inj["collision"]),
          "classification: " + cls_json.dump(),
          "blocking words (s=" + std::to_string(default_s) + ", len<=" + std::to_string(o.max_len) +
              "): " + std::to_string(words.size())};
      for (const auto& h : words)
        lines.push_back("  " + abc.format(h.word) + " @" + std::to_string(h.offset) + " preperiod=" +
                        std::to_string(h.certificate.preperiod) + " period=" + std::to_string(h.certificate.period));
      emit(j, lines);
      return 0;
    }

    if (*blocking) {
      const auto s = width.value_or(default_s);
      BlockingOptions bopt;
      bopt.margin = margin;
      if (word_text.empty()) {
        auto words = find_blocking_words(rule, s, o.max_len, o.max_steps, bopt);
        json hits = json::array();
        std::vector<std::string> lines;
        for (const auto& h : words) {
          hits.push_back(hit_json(abc, h));
          lines.push_back(abc.format(h.word) + " @" + std::to_string(h.offset));
        }
        lines.push_back("certified: " + std::to_string(words.size()));
        emit(json{{"s", s}, {"blocking_words", hits}}, lines);
        return 0;
      }
      const Word w = abc.parse(word_text);
      json results = json::array();
      std::vector<std::string> lines;
      std::vector<std::size_t> offsets;
      if (offset) offsets.push_back(*offset);
      else
        for (std::size_t p = 0; p + s <= w.size(); ++p) offsets.push_back(p);
      for (auto p : offsets) {
        auto v = verdict_json(abc, verify_blocking(rule, BlockingQuery{w, s, p}, o.max_steps, bopt));
        v["offset"] = p;
        lines.push_back("offset " + std::to_string(p) + ": " + v.dump());
        results.push_back(v);
      }
      emit(json{{"word", word_text}, {"s", s}, {"results", results}}, lines);
      return 0;
    }

    auto make_x = [&] { return CyclicConfiguration(abc.parse(config_text), phase); };

    if (*trace) {
      const auto x = make_x();
      const auto win = parse_window(window_text);
      auto orbit = orbit_cycle(rule, x, o.budget);
      auto tr = trace_from_orbit(orbit, win.i1, win.i2);
      json words = json::array();
      for (const auto& w : tr.words) words.push_back(abc.format(w));
      json j{{"orbit_preperiod", orbit.preperiod}, {"orbit_period", orbit.period},
             {"trace_preperiod", tr.preperiod},   {"trace_period", tr.period},
             {"window", {win.i1, win.i2}},         {"words", words}};
      std::vector<std::string> lines{
          "orbit: preperiod=" + std::to_string(orbit.preperiod) + " period=" + std::to_string(orbit.period),
          "trace: preperiod=" + std::to_string(tr.preperiod) + " period=" + std::to_string(tr.period)};
      for (std::size_t n = 0; n < tr.words.size(); ++n)
        lines.push_back("  " + std::to_string(n) + " " + abc.format(tr.words[n]) +
                        (n >= tr.preperiod ? "  (periodic)" : ""));
      emit(j, lines);
      return 0;
    }

    if (*factor) {
      const auto x = make_x();
      const auto win = parse_window(window_text);
      auto f = build_factor(rule, x, win.i1, win.i2, o.budget);
      auto ver = verify_factor(rule, f, verify_bound);
      json phases = json::array();
      for (const auto& w : f.phase_words) phases.push_back(abc.format(w));
      json violations = json::array();
      for (const auto& v : ver.violations)
        violations.push_back({{"point", abc.format(v.point.period_word())},
                              {"phase", v.phase},
                              {"image_phase", v.image_phase ? json(*v.image_phase) : json(nullptr)}});
      json j{{"period", f.period},
             {"preperiod", f.preperiod},
             {"window", {f.i1, f.i2}},
             {"phase_words", phases},
             {"verification", {{"bound", verify_bound},
                               {"enumerated", ver.enumerated},
                               {"checked", ver.checked},
                               {"violations", violations}}}};
      std::vector<std::string> lines{"factor period: " + std::to_string(f.period) +
                                         " (trace preperiod " + std::to_string(f.preperiod) + ")",
                                     "phase words: " + phases.dump(),
                                     "verification: checked " + std::to_string(ver.checked) + " of " +
                                         std::to_string(ver.enumerated) + ", violations " +
                                         std::to_string(ver.violations.size())};
      for (const auto& v : violations) lines.push_back("  violation: " + v.dump());
      emit(j, lines);
      return 0;
    }

    if (*spacetime) {
      const auto x = make_x();
      Window win{0, static_cast<long long>(x.period()) - 1};
      if (!window_text.empty()) win = parse_window(window_text);
      const auto width_cells = static_cast<std::size_t>(win.i2 - win.i1 + 1);
      if (width_cells > max_width)
        throw ResourceError("window of " + std::to_string(width_cells) + " cells exceeds --max-width " +
                            std::to_string(max_width));
      auto block = space_time(rule, x, steps, win.i1, win.i2);
      std::string rendered = o.format == "pgm" ? render_pgm(block, abc.size())
                                               : render_ascii(block, palette.empty() ? default_palette(abc) : palette);
      if (!output.empty()) {
        std::ofstream f(output, std::ios::binary);
        if (!f) throw Error("cannot write '" + output + "'");
        f << rendered;
      } else {
        out << rendered;
      }
      return 0;
    }

    if (*spectrum) {
      Window win{-rule.radius(), rule.radius()};
      if (!window_text.empty()) win = parse_window(window_text);
      Word symbols;
      if (y_symbols.empty()) {
        for (std::size_t i = 0; i < abc.size(); ++i) symbols.push_back(static_cast<Symbol>(i));
      } else {
        symbols = abc.parse(y_symbols);
      }
      auto report = period_spectrum(rule, abc.parse(x_center), words_over(symbols, y_max_len), win.i1, win.i2,
                                    o.budget, o.max_steps);
      json entries = json::array();
      std::vector<std::string> lines;
      bool failed = false;
      for (const auto& e : report.entries) {
        json je{{"y", abc.format(e.y)},
                {"trace_preperiod", e.trace_preperiod},
                {"trace_period", e.trace_period},
                {"factor_period", e.factor_period},
                {"running_lcm", e.running_lcm}};
        std::string line = abc.format(e.y) + " " + std::to_string(e.trace_preperiod) + " " +
                           std::to_string(e.trace_period) + " " + std::to_string(e.factor_period) + " " +
                           std::to_string(e.running_lcm);
        if (e.error) {
          je["error"] = *e.error;
          line += " error: " + *e.error;
          failed = true;
        }
        entries.push_back(je);
        lines.push_back(line);
      }
      json periods(report.periods);
      lines.push_back("periods: " + periods.dump());
      lines.push_back("lcm: " + std::to_string(report.lcm));
      lines.push_back(std::string("lcm grows: ") + (report.lcm_grew ? "yes" : "no"));
      if (!report.x_center_certified) lines.push_back("note: x-center is not a certified blocking word");
      emit(json{{"entries", entries},
                {"periods", periods},
                {"lcm", report.lcm},
                {"lcm_grew", report.lcm_grew},
                {"x_center_certified", report.x_center_certified}},
           lines);
      return failed ? 1 : 0;
    }
  } catch (const Error& e) {
    if (o.as_json) {
      out << json{{"error", e.what()}}.dump(2) << "\n";
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace cadyn::cli
