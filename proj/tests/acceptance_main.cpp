// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "accentshift/harness.hpp"
#include "accentshift/report.hpp"
#include "accentshift/utf8.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace accentshift;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string rewrite(const std::string& ipa) {
  const auto& e = default_engine();
  return detokenize(e.apply(tokenize(ipa, e.inventory()), RuleConfig::all()).output);
}

void psr_arithmetic() {
  const std::pair<std::uint64_t, double> cases[] = {{189500, 0.856}, {171500, 0.775}, {139000, 0.628}};
  for (const auto& [n2, want] : cases) {
    const double got = corpus_psr(221400, n2);
    expect(std::abs(got - want) <= 5e-4, "N2=" + std::to_string(n2) + " gave " + std::to_string(got));
  }
}

void rule_goldens() {
  const std::pair<const char*, const char*> cases[] = {
      {"bæθ", "bɑθ"}, {"goʊt", "gəʊt"}, {"kaɹ", "kɑː"}, {"waɾɚ", "wɑtə"}, {"læɾəɹ", "lɑtəː"}};
  for (const auto& [in, want] : cases) {
    const auto got = rewrite(in);
    expect(got == want, std::string(in) + " -> " + got + ", expected " + want);
  }
}

void property_suite() {
  constexpr int kCases = 1000;
  const auto start = std::chrono::steady_clock::now();
  const auto& e = default_engine();
  const auto& inv = e.inventory();
  std::mt19937_64 rng(20250916);

  for (int i = 0; i < kCases; ++i) {
    const auto s = oracle::random_ipa(rng, inv, 32);
    const auto seq = tokenize(s, inv);
    const auto tag = "case " + std::to_string(i) + " '" + s + "': ";
    expect(detokenize(seq) == s, tag + "tokenize/detokenize roundtrip");

    const auto all = e.apply(seq, RuleConfig::all());
    expect(all.output.size() == seq.size(), tag + "token count changed");
    expect(all.output.codepoint_count() == seq.codepoint_count(), tag + "codepoint count changed");
    expect(utf8::length(detokenize(all.output)) == utf8::length(s), tag + "rendered length changed");
    expect(e.apply(all.output, RuleConfig::all()).count_by_family.total() == 0, tag + "not a fixpoint");
    expect(oracle::replay(oracle::symbols_of(seq), all.trace, e.ruleset()) == oracle::symbols_of(all.output),
           tag + "trace replay differs");

    for (auto a : kAllFamilies) {
      for (auto b : kAllFamilies) {
        if (a == b) continue;
        const auto ab = e.apply(e.apply(seq, RuleConfig::only(a)).output, RuleConfig::only(b)).output;
        const auto ba = e.apply(e.apply(seq, RuleConfig::only(b)).output, RuleConfig::only(a)).output;
        const auto both = e.apply(seq, RuleConfig{a, b});
        expect(ab == ba, tag + "families do not commute");
        expect(ab == both.output, tag + "sequential differs from joint application");
        const auto sum =
            e.apply(seq, RuleConfig::only(a)).count_by_family.total() + e.apply(seq, RuleConfig::only(b)).count_by_family.total();
        expect(both.count_by_family.total() == sum, tag + "counts not additive");
      }
    }
  }
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(secs < 10.0, "took " + std::to_string(secs) + " s");
}

void endpoints() {
  const auto& e = default_engine();
  ScoreOptions opts;
  opts.applied = RuleConfig::all();

  auto rows = transform_manifest(testutil::revert_corpus_rows(), e, RuleConfig::all()).rows;
  for (auto& r : rows) r.recognized_ipa = r.ipa_transformed;
  const auto zero = score_manifest(rows, e, opts).row.psr;
  expect(zero == 0.0, "recognized == transformed did not give 0");

  for (auto& r : rows) r.recognized_ipa = r.ipa_source;
  const auto one = score_manifest(rows, e, opts).row.psr;
  expect(one == 1.0, "recognized == source did not give 1");

  auto reverted = testutil::revert_corpus_rows();
  const auto plan = testutil::revert_fraction(reverted, 0.3, 77);
  expect(plan.reverted * 10 == plan.n1 * 3, "corpus size does not allow an exact 30%");
  const auto s = score_manifest(reverted, e, opts);
  expect(s.row.n2.total() == plan.reverted, "N2 does not match the reverted count");
  expect(s.row.psr && format_psr(*s.row.psr) == "0.300" && *s.row.psr == 0.3,
         "30% revert gave " + format_psr(s.row.psr));
}

void ablation_structure() {
  ExperimentConfig base;
  base.name = "B Spk Emb";
  const auto suite = ablation_suite(base);
  expect(suite.size() == 8, "expected 8 conditions, got " + std::to_string(suite.size()));
  const RuleConfig want[] = {RuleConfig::none(),
                             RuleConfig::only(Family::Flapping),
                             RuleConfig::only(Family::Rhoticity),
                             RuleConfig::only(Family::Vowel),
                             RuleConfig::all(),
                             {Family::Rhoticity, Family::Vowel},
                             {Family::Flapping, Family::Vowel},
                             {Family::Flapping, Family::Rhoticity}};
  for (std::size_t i = 0; i < 8; ++i) {
    expect(suite[i].families == want[i], suite[i].name + " has " + suite[i].families.to_string());
  }
}

void metric_units() {
  const auto p = softmax({2.0, 1.0, 0.0});
  expect(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9, "softmax does not sum to 1");
  expect(std::abs(p[0] - 0.6652) < 5e-5 && std::abs(p[1] - 0.2447) < 5e-5 && std::abs(p[2] - 0.0900) < 5e-5,
         "softmax(2,1,0) off");

  const std::vector<double> v{0.5, -1.0, 2.0};
  expect(std::abs(cosine(v, v) - 1.0) < 1e-12, "cosine(v, v) != 1");
  expect(std::abs(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 3})) < 1e-12,
         "cosine of orthogonal vectors != 0");

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::uint64_t> xs(std::uniform_int_distribution<std::size_t>(1, 300)(rng));
    std::uniform_int_distribution<std::uint64_t> d(0, std::uniform_int_distribution<std::uint64_t>(0, 200)(rng));
    for (auto& x : xs) x = d(rng);
    const double area = trapezoid_integral(utterance_changes_kde(xs, 128));
    expect(std::abs(area - 1.0) <= 0.01, "KDE integral " + std::to_string(area));
  }
}

int run_cli(const std::string& args) {
  const auto cmd = std::string(ACCENTSHIFT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism() {
  const auto cfg = testutil::fixture_dir() / "suite" / "suite.json";
  const auto dir = testutil::temp_dir("acceptance_determinism");
  for (const char* run : {"a", "b"}) {
    const int rc = run_cli("suite '" + cfg.string() + "' --out '" + (dir / run).string() + "'");
    expect(rc == 0, std::string("suite run ") + run + " exited " + std::to_string(rc));
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir / "a");
    expect(fs::exists(dir / "b" / rel), rel.string() + " missing from second run");
    expect(testutil::read_file(entry.path()) == testutil::read_file(dir / "b" / rel), rel.string() + " differs");
    ++compared;
  }
  std::size_t second = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "b")) second += entry.is_regular_file();
  expect(compared == second, "runs produced different file sets");
  expect(compared > 0, "no report files written");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"psr-arithmetic", psr_arithmetic},
      {"rule-goldens", rule_goldens},
      {"property-suite", property_suite},
      {"psr-endpoints", endpoints},
      {"ablation-structure", ablation_structure},
      {"metric-units", metric_units},
      {"suite-determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      check();
      std::cout << "PASS " << name << '\n';
    } catch (const Failure& f) {
      std::cout << "FAIL " << name << ": " << f.what << '\n';
      ++failed;
    } catch (const std::exception& e) {
      std::cout << "FAIL " << name << ": exception: " << e.what() << '\n';
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
