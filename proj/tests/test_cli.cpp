#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cadyn/cadyn.hpp"
#include "cli.hpp"
#include "test_util.hpp"

using namespace cadyn;
using namespace cadyn::testing;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  args.push_back("--json");
  auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

// Every documented zoo property, recomputed.
TEST(Zoo, DocumentedPropertiesHold) {
  for (const auto& e : zoo()) {
    SCOPED_TRACE(e.name);
    EXPECT_EQ(is_surjective(e.rule).surjective, e.surjective);
    EXPECT_EQ(is_injective(e.rule).injective, e.injective);
    const auto s = static_cast<std::size_t>(std::max(e.rule.radius(), 1));
    auto first = first_blocking_word(e.rule, s, 4, 64);
    ASSERT_EQ(first.has_value(), e.blocking_word.has_value());
    if (first) {
      EXPECT_EQ(e.rule.alphabet().format(first->word), *e.blocking_word);
    }
    EXPECT_EQ(to_string(classify_kurka(e.rule).kind), e.classification);
  }
}

TEST(Zoo, WallRuleTableAsPrinted) {
  auto p = wall_signal_rule();
  EXPECT_EQ(p.memory(), -1);
  EXPECT_EQ(p.anticipation(), 0);
  const char* rows[][2] = {{"wr", "r"}, {"w0", "0"}, {"ww", "w"}, {"rr", "0"}, {"r0", "r"},
                           {"rw", "w"}, {"0r", "0"}, {"00", "0"}, {"0w", "w"}};
  for (auto& row : rows) EXPECT_EQ(S(p, Word{p(W(p, row[0]))}), row[1]) << row[0];
}

TEST(Zoo, UnknownName) {
  EXPECT_THROW(zoo_entry("nope"), ParseError);
}

TEST(RuleSource, ElementaryBitOrder) {
  // Neighborhood b2 b1 b0 reads bit 4·b2 + 2·b1 + b0 of N.
  for (unsigned n : {0u, 30u, 90u, 110u, 204u, 255u}) {
    auto rule = resolve_rule("eca:" + std::to_string(n));
    for (unsigned idx = 0; idx < 8; ++idx) {
      Word nb{static_cast<Symbol>(idx >> 2 & 1), static_cast<Symbol>(idx >> 1 & 1), static_cast<Symbol>(idx & 1)};
      EXPECT_EQ(rule(nb), (n >> idx) & 1u);
    }
  }
  EXPECT_TRUE(is_identity_rule(resolve_rule("eca:204")));
  EXPECT_THROW(resolve_rule("eca:256"), ParseError);
  EXPECT_THROW(resolve_rule("eca:x"), ParseError);
  EXPECT_THROW(resolve_rule("/no/such/rule.json"), ParseError);
}

TEST(RuleSource, NumberedRules) {
  auto r = resolve_rule("tab:3:0:0:" + std::to_string(1 + 2 * 3 + 0 * 9));
  EXPECT_TRUE(same_global_map(r, rotation_rule(3)));
  EXPECT_EQ(numbered_rule_name(2, -1, 1, 90), "eca:90");
  EXPECT_EQ(numbered_rule_name(3, -1, 0, 7), "tab:3:-1:0:7");
  EXPECT_THROW(resolve_rule("tab:3:0:0:19683"), ParseError);
}

TEST(RuleJson, RoundTripProperty) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 3;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(trial % 2 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i * 11));
    std::vector<Symbol> table;
    auto base = random_rule(rng, k, -(trial % 2), trial % 3 == 0 ? 1 : 0);
    LocalRule rule(Alphabet(names), base.memory(), base.anticipation(), base.table());
    auto doc = rule_to_json(rule);
    auto back = rule_from_json_text(doc.dump());
    EXPECT_EQ(back.alphabet(), rule.alphabet());
    EXPECT_EQ(back.memory(), rule.memory());
    EXPECT_EQ(back.anticipation(), rule.anticipation());
    EXPECT_EQ(back.table(), rule.table());
    EXPECT_EQ(rule_to_json(back), doc);
  }
}

TEST(RuleJson, RejectsBadDocuments) {
  auto doc = rule_to_json(wall_signal_rule());
  auto missing = doc;
  missing["table"].erase("ww");
  EXPECT_THROW(rule_from_json(missing), ParseError);
  auto bad_len = doc;
  bad_len["table"]["www"] = "w";
  EXPECT_THROW(rule_from_json(bad_len), ParseError);
  auto bad_sym = doc;
  bad_sym["table"]["ww"] = "x";
  EXPECT_THROW(rule_from_json(bad_sym), ParseError);
  auto no_alpha = doc;
  no_alpha.erase("alphabet");
  EXPECT_THROW(rule_from_json(no_alpha), ParseError);
  auto reversed = doc;
  reversed["memory"] = 1;
  EXPECT_THROW(rule_from_json(reversed), ParseError);
  EXPECT_THROW(rule_from_json_text("{not json"), ParseError);
}

TEST(RuleJson, FileRules) {
  auto path = std::filesystem::temp_directory_path() / "cadyn_test_rule.json";
  {
    std::ofstream f(path);
    f << rule_to_json(wall_signal_rule()).dump(2);
  }
  auto r = run_json({"surjective", "--rule", path.string()});
  EXPECT_EQ(r["surjective"], false);
  EXPECT_EQ(r["orphan"], "w0r");
  std::filesystem::remove(path);
}

TEST(Spacetime, WallOrbitTable) {
  auto r = run({"spacetime", "--rule", "zoo:paper3", "--config", "wr000", "--steps", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out), (std::vector<std::string>{"wr000", "wrr00", "wr0r0", "wrr0r", "wr0r0"}));
}

TEST(Spacetime, IdentityRowsRepeat) {
  auto r = run({"spacetime", "--rule", "eca:204", "--config", "0110100", "--steps", "5"});
  auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 6u);
  for (auto& row : rows) EXPECT_EQ(row, "0110100");
}

// Rule 90 from a single 1: Pascal's triangle mod 2.
TEST(Spacetime, Rule90Sierpinski) {
  std::string init(64, '0');
  init[32] = '1';
  auto r = run({"spacetime", "--rule", "eca:90", "--config", init, "--steps", "32"});
  auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 33u);
  std::vector<int> cur(64, 0);
  cur[32] = 1;
  for (int t = 0; t <= 32; ++t) {
    for (int i = 0; i < 64; ++i) {
      const int off = i - 32;
      int expected = 0;
      // Before the two fronts meet across the period the binomial formula holds.
      if (t < 32 && std::abs(off) <= t && (t + off) % 2 == 0) {
        const int j = (t + off) / 2;
        expected = (t & j) == j;
      }
      ASSERT_EQ(rows[t][i] - '0', cur[i]) << "t=" << t << " i=" << i;
      if (t < 32) {
        ASSERT_EQ(cur[i], expected) << "t=" << t << " i=" << i;
      }
    }
    std::vector<int> next(64);
    for (int i = 0; i < 64; ++i) next[i] = cur[(i + 63) % 64] ^ cur[(i + 1) % 64];
    cur = next;
  }
}

TEST(Spacetime, AsciiAndPgmAgree) {
  const std::vector<std::string> base{"spacetime", "--rule", "zoo:paper3", "--config", "wr000r0", "--steps", "9",
                                      "--window=-3,10"};
  auto ascii = run(base);
  auto pgm_args = base;
  pgm_args.insert(pgm_args.end(), {"--format", "pgm"});
  auto pgm = run(pgm_args);
  ASSERT_EQ(ascii.code, 0);
  ASSERT_EQ(pgm.code, 0);
  auto rows = lines_of(ascii.out);
  const std::string header = "P5\n14 10\n255\n";
  ASSERT_EQ(pgm.out.substr(0, header.size()), header);
  const std::string pixels = pgm.out.substr(header.size());
  ASSERT_EQ(pixels.size(), 14u * 10u);
  auto p = wall_signal_rule();
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t i = 0; i < 14; ++i) {
      const auto sym = p.alphabet().index(std::string(1, rows[t][i]));
      EXPECT_EQ(static_cast<unsigned char>(pixels[t * 14 + i]), 255 * sym / 2);
    }
}

TEST(Spacetime, WindowLimitAndOutputFile) {
  auto r = run({"spacetime", "--rule", "eca:90", "--config", "01", "--steps", "2", "--window=0,100", "--max-width",
                "50"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("max-width"), std::string::npos);

  auto path = std::filesystem::temp_directory_path() / "cadyn_test_st.txt";
  auto w = run({"spacetime", "--rule", "eca:204", "--config", "01", "--steps", "1", "--output", path.string()});
  EXPECT_EQ(w.code, 0);
  EXPECT_TRUE(w.out.empty());
  std::ifstream f(path);
  std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "01\n01\n");
  std::filesystem::remove(path);
}

TEST(Analyze, WallRule) {
  auto j = run_json({"analyze", "--rule", "zoo:paper3"});
  EXPECT_EQ(j["surjectivity"]["surjective"], false);
  EXPECT_EQ(j["surjectivity"]["orphan"], "w0r");
  EXPECT_EQ(j["injectivity"]["injective"], false);
  EXPECT_FALSE(j["injectivity"]["diamond"].is_null());
  EXPECT_EQ(j["classification"]["class"], "AlmostEquicontinuousEvidence");
  EXPECT_EQ(j["classification"]["blocking_word"]["word"], "ww");
  EXPECT_FALSE(j["blocking_words"].empty());
}

TEST(Analyze, IdentityAndShift) {
  auto id = run_json({"analyze", "--rule", "eca:204"});
  EXPECT_EQ(id["surjectivity"]["surjective"], true);
  EXPECT_EQ(id["injectivity"]["injective"], true);
  EXPECT_EQ(id["classification"]["class"], "EquicontinuousCertified");
  EXPECT_EQ(id["classification"]["m"], 0);
  EXPECT_EQ(id["classification"]["p"], 1);

  auto sh = run_json({"analyze", "--rule", "eca:170"});
  EXPECT_EQ(sh["surjectivity"]["surjective"], true);
  EXPECT_EQ(sh["injectivity"]["injective"], true);
  EXPECT_EQ(sh["classification"]["class"], "SensitiveEvidence");
  EXPECT_TRUE(sh["blocking_words"].empty());
}

TEST(Injective, BoundedDiamond) {
  auto j = run_json({"injective", "--rule", "zoo:paper3", "--diamond-len", "3"});
  EXPECT_EQ(j["injective"], false);
  EXPECT_FALSE(j["bounded_diamond"].is_null());
  auto r90 = run_json({"injective", "--rule", "eca:90"});
  EXPECT_TRUE(r90["diamond"].is_null());
  EXPECT_FALSE(r90["collision"].is_null());
}

TEST(Blocking, SingleWordQuery) {
  auto j = run_json({"blocking", "--rule", "zoo:paper3", "--word", "ww", "--s", "1", "--offset", "0"});
  ASSERT_EQ(j["results"].size(), 1u);
  EXPECT_EQ(j["results"][0]["verdict"], "Certified");
  auto sh = run_json({"blocking", "--rule", "zoo:shift", "--word", "00", "--s", "1"});
  EXPECT_EQ(sh["results"][0]["verdict"], "Refuted");
}

TEST(TraceAndFactor, WallRuleCommands) {
  auto tr = run_json({"trace", "--rule", "zoo:paper3", "--config", "wr000", "--window=-1,1"});
  EXPECT_EQ(tr["orbit_preperiod"], 2);
  EXPECT_EQ(tr["orbit_period"], 2);
  EXPECT_EQ(tr["trace_period"], 2);
  EXPECT_EQ(tr["words"], json({"0wr", "0wr", "0wr", "rwr"}));

  auto f = run_json({"factor", "--rule", "zoo:paper3", "--config", "wr000", "--window=-1,1", "--verify-bound", "5"});
  EXPECT_EQ(f["period"], 2);
  EXPECT_EQ(f["phase_words"], json({"0wr", "rwr"}));
  EXPECT_FALSE(f["verification"]["violations"].empty());

  auto wide = run_json({"factor", "--rule", "zoo:paper3", "--config", "wr000", "--window=0,5"});
  EXPECT_TRUE(wide["verification"]["violations"].empty());

  auto id = run_json({"factor", "--rule", "eca:204", "--config", "0110", "--window=0,1"});
  EXPECT_EQ(id["period"], 1);
  auto rot = run_json({"factor", "--rule", "zoo:rot3", "--config", "0", "--window=0,0"});
  EXPECT_EQ(rot["period"], 3);
}

TEST(Spectrum, Commands) {
  auto rot = run_json({"spectrum", "--rule", "zoo:rot3", "--x-center", "0", "--y-max-len", "2"});
  EXPECT_EQ(rot["periods"], json({3}));
  auto p = run_json({"spectrum", "--rule", "zoo:paper3", "--x-center", "ww", "--y-symbols", "0r", "--y-max-len", "5"});
  EXPECT_GE(p["periods"].size(), 2u);
  EXPECT_EQ(p["lcm_grew"], true);
  EXPECT_EQ(p["x_center_certified"], true);
}

TEST(Scan, ElementarySurjective) {
  auto j = run_json({"scan", "--space", "eca", "--require", "surjective"});
  EXPECT_EQ(j["count"], 30);
  for (auto& m : j["matches"]) {
    auto rule = resolve_rule(m["rule"].get<std::string>());
    EXPECT_TRUE(balanced_up_to(rule, 3)) << m["rule"];
  }
}

TEST(Scan, ElementarySurjectiveBlocking) {
  auto j = run_json({"scan", "--space", "eca", "--require", "surjective,blocking", "--s", "1"});
  std::set<std::string> names;
  for (auto& m : j["matches"]) names.insert(m["rule"].get<std::string>());
  EXPECT_TRUE(names.count("eca:204"));
  EXPECT_TRUE(names.count("eca:51"));
}

TEST(Scan, SampledTernarySpaceHitsRecertify) {
  ScanPredicates pred;
  pred.surjective = true;
  pred.blocking_width = 1;
  pred.blocking_max_len = 3;
  pred.not_eventually_periodic = 8;
  auto hits = scan_rules(parse_rule_space("3:-1:0"), pred, 4000, 7);
  ASSERT_FALSE(hits.empty());
  for (auto& h : hits) {
    auto rule = resolve_rule(h.name);
    EXPECT_TRUE(is_surjective(rule).surjective);
    ASSERT_TRUE(h.blocking);
    auto v = verify_blocking(rule, BlockingQuery{h.blocking->word, 1, h.blocking->offset}, 64);
    EXPECT_TRUE(std::holds_alternative<Certified>(v));
    EXPECT_FALSE(eventual_map_period(rule, 8, 1'000'000));
  }
  // Same seed, same sample.
  auto again = scan_rules(parse_rule_space("3:-1:0"), pred, 4000, 7);
  ASSERT_EQ(again.size(), hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) EXPECT_EQ(again[i].number, hits[i].number);
}

TEST(Scan, RejectsUnknownPredicates) {
  EXPECT_EQ(run({"scan", "--space", "eca", "--require", "pretty"}).code, 2);
  EXPECT_THROW(parse_rule_space("2:1"), ParseError);
  EXPECT_THROW(parse_rule_space("2:1:0"), ParseError);
}

TEST(ExitStatus, ZeroIffNoErrorRecord) {
  auto ok = run({"zoo"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("zoo:paper3"), std::string::npos);

  auto bad_rule = run({"analyze", "--rule", "eca:999", "--json"});
  EXPECT_EQ(bad_rule.code, 2);
  EXPECT_TRUE(json::parse(bad_rule.out).contains("error"));

  auto bad_word = run({"trace", "--rule", "zoo:paper3", "--config", "wx0", "--window=0,0"});
  EXPECT_EQ(bad_word.code, 2);
  EXPECT_FALSE(bad_word.err.empty());

  auto ill = run({"factor", "--rule", "zoo:paper3", "--config", "wr000", "--window=0,0"});
  EXPECT_EQ(ill.code, 0);

  auto missing = run({"trace", "--rule", "zoo:paper3"});
  EXPECT_NE(missing.code, 0);

  auto budget = run({"trace", "--rule", "zoo:rot3", "--config", "0", "--window=0,0", "--budget", "2", "--json"});
  EXPECT_EQ(budget.code, 2);
  EXPECT_TRUE(json::parse(budget.out).contains("error"));
}
