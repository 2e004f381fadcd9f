// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run every criterion
//   acceptance --criterion N   run one
// Exit code 0 iff every criterion that ran passed.

#include "spinsim/montecarlo.hpp"
#include "spinsim/nonlocality.hpp"
#include "spinsim/search.hpp"
#include "spinsim/successive.hpp"
#include "spinsim/tables.hpp"
#include "spinsim/temporal.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace spinsim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kRounds = 1000000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [miss] " << what << ';';
    }
  }
  void note(const std::string& s) { detail << ' ' << s << ';'; }
};

std::string num(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

UnitVector3 random_dir(RandomStream& r) { return sample_unit_sphere(r); }

// Moment checks shared by the singlet protocols: <ab> against the closed form, zero means and
// uniform marginals.
void check_singlet_protocol(Outcome& o, const ProtocolKind& kind, SpinValue s, const UnitVector3& a,
                            const UnitVector3& b, std::uint64_t seed, const std::string& label) {
  const auto est = estimate(kind, s, a, b, kRounds, seed);
  const auto ab = compare_to_oracle(est, singlet_correlation_closed_form(s, a, b), 4.0, Moment::alphabeta);
  const auto ma = compare_to_oracle(est, 0.0, 4.0, Moment::alpha);
  const auto mb = compare_to_oracle(est, 0.0, 4.0, Moment::beta);
  const double pa = uniformity_test(est.marginal_hist_alpha), pb = uniformity_test(est.marginal_hist_beta);
  o.require(ab.pass, label + " <ab> z=" + num(ab.z_score));
  o.require(ma.pass && mb.pass, label + " marginal means z=" + num(ma.z_score) + "," + num(mb.z_score));
  o.require(pa > 1e-3 && pb > 1e-3, label + " uniformity p=" + num(pa) + "," + num(pb));
  o.require(est.cbits_per_round == resources(kind, s).n_cbits, label + " cbits " + std::to_string(est.cbits_per_round));
}

// 1. Singlet closed form.
void criterion1(Outcome& o) {
  RandomStream r(1001, 0);
  double worst = 0;
  for (int t = 1; t <= 8; ++t)
    for (int k = 0; k < 100; ++k) {
      SpinValue s(t);
      auto a = random_dir(r), b = random_dir(r);
      worst = std::max(worst, std::abs(singlet_correlation_exact(s, a, b) - singlet_correlation_closed_form(s, a, b)));
    }
  o.require(worst < 1e-9, "max deviation " + num(worst));
  o.note("max deviation " + num(worst) + " (tol 1e-9)");
}

// 2. Toner-Bacon.
void criterion2(Outcome& o) {
  RandomStream r(1002, 0);
  for (int k = 0; k < 20; ++k) {
    auto a = random_dir(r), b = random_dir(r);
    check_singlet_protocol(o, TonerBacon{}, SpinValue(1), a, b, 2000 + k, "pair " + std::to_string(k));
  }
  o.note("20 pairs x 1e6 rounds, 4 sigma, uniformity p > 1e-3");
}

// 3. Protocol I.
void criterion3(Outcome& o) {
  RandomStream r(1003, 0);
  for (int t = 1; t <= 6; ++t) {
    SpinValue s(t);
    auto a = random_dir(r), b = random_dir(r);
    check_singlet_protocol(o, BinaryRecursive{}, s, a, b, 3000 + t, "s=" + to_string(s));
    const int expect = static_cast<int>(std::ceil(std::log2(s.value() + 1)));
    o.require(protocol1_resources(s).n_cbits == expect, "s=" + to_string(s) + " cbits vs ceil(log2(s+1))");
  }
  o.note("s = 1/2..3 at 1e6 rounds, 4 sigma; cbits = ceil(log2(s+1))");
}

// 4. Protocol II.
void criterion4(Outcome& o) {
  RandomStream r(1004, 0);
  const std::pair<int, int> cases[] = {{2, 2}, {2, 3}, {3, 1}, {3, 2}};
  for (auto [P, n] : cases) {
    ProtocolKind kind = PAdicComposite{P, n};
    const SpinValue s = protocol_spin(kind, SpinValue(1));
    auto a = random_dir(r), b = random_dir(r);
    check_singlet_protocol(o, kind, s, a, b, 4000 + 10 * P + n,
                           "(P,n)=(" + std::to_string(P) + "," + std::to_string(n) + ")");
  }
  const int c32 = protocol2_resources(3, 2).n_cbits, c4 = protocol1_resources(SpinValue(8)).n_cbits;
  o.require(c32 == 2 && c4 == 3, "cbits (3,2)=" + std::to_string(c32) + " protocol I at s=4 " + std::to_string(c4));
  o.note("cbits (3,2)=" + std::to_string(c32) + ", protocol I s=4: " + std::to_string(c4));
}

// 5. Non-maximally entangled qubits.
void criterion5(Outcome& o) {
  RandomStream r(1005, 0);
  int done = 0;
  while (done < 10) {
    const double gamma = r.uniform() * kPi / 4;
    const auto a = random_dir(r);
    const double phi = r.uniform() * 2 * kPi;
    const UnitVector3 b(std::cos(phi), std::sin(phi), 0.0);
    try {
      nonmax_offset(gamma, a);
    } catch (const UnsupportedRegime&) {
      continue;
    }
    const auto est = estimate(NonMaxEntangled{gamma}, SpinValue(1), a, b, kRounds, 5000 + done);
    const auto ma = compare_to_oracle(est, a.z() * std::cos(2 * gamma), 4.0, Moment::alpha);
    const auto mb = compare_to_oracle(est, 0.0, 4.0, Moment::beta);
    const auto mab = compare_to_oracle(est, std::sin(2 * gamma) * a.dot(b), 4.0, Moment::alphabeta);
    const std::string label = "config " + std::to_string(done);
    o.require(ma.pass, label + " <a> z=" + num(ma.z_score));
    o.require(mb.pass, label + " <b> z=" + num(mb.z_score));
    o.require(mab.pass, label + " <ab> z=" + num(mab.z_score));
    ++done;
  }
  o.note("10 valid configurations, b in x-y plane, 4 sigma");
}

// 6. Two-step maxima for the pure state.
void criterion6(Outcome& o) {
  double worst = 0;
  for (auto s : table_spins()) {
    const double v = table2_eta2(s), ref = *TableReference::eta2(s.twice_s());
    worst = std::max(worst, std::abs(v - ref));
    o.require(std::abs(v - ref) <= 1e-3, "s=" + to_string(s) + " " + num(v) + " vs " + num(ref));
  }
  const double inf = table2_eta2(large_s());
  o.require(std::abs(inf - 1.143) <= 1e-2, "large s " + num(inf));
  o.note("max |diff| " + num(worst) + " (tol 1e-3); s=1000: " + num(inf) + " (tol 1e-2 of 1.143)");
}

// 7. xi windows.
void criterion7(Outcome& o) {
  double worst = 0;
  for (auto s : table_spins()) {
    const auto w = table1_windows(s);
    const auto ref = *TableReference::xi_windows(s.twice_s());
    if (w.size() != ref.size()) {
      o.require(false, "s=" + to_string(s) + " window count " + std::to_string(w.size()));
      continue;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (auto [got, want] : {std::pair{w[i].lo, ref[i].lo}, std::pair{w[i].hi, ref[i].hi}}) {
        worst = std::max(worst, std::abs(got - want));
        o.require(std::abs(got - want) <= 5e-3, "s=" + to_string(s) + " endpoint " + num(got) + " vs " + num(want));
      }
    }
  }
  o.note("max |diff| " + num(worst) + " (tol 5e-3)");
}

// 8. Noise thresholds.
void criterion8(Outcome& o) {
  double worst = 0;
  for (auto s : table_spins()) {
    const double v = table3_threshold(s), ref = *TableReference::noise_threshold(s.twice_s());
    worst = std::max(worst, std::abs(v - ref));
    o.require(std::abs(v - ref) <= 5e-3, "s=" + to_string(s) + " " + num(v) + " vs " + num(ref));
  }
  o.require(table3_threshold(SpinValue(1)) == 1.0, "s=1/2 not violated on all of [0,1]");
  o.note("max |diff| " + num(worst) + " (tol 5e-3); s=1/2 threshold " + num(table3_threshold(SpinValue(1))));
}

// 9. Three-step maxima.
void criterion9(Outcome& o) {
  double worst = 0;
  for (auto s : table_spins()) {
    const double v = table4_eta3(s, 0).eta3, ref = *TableReference::eta3(s.twice_s());
    worst = std::max(worst, std::abs(v - ref));
    o.require(std::abs(v - ref) <= 5e-3, "s=" + to_string(s) + " " + num(v) + " vs " + num(ref));
  }
  o.note("max |diff| " + num(worst) + " (tol 5e-3)");
}

// 10. Qubit MK maxima in +-1 units.
void criterion10(Outcome& o) {
  const auto st = InitialState::qubit(UnitVector3());
  for (int n = 2; n <= 6; ++n) {
    auto f = [&](const Eigen::VectorXd& x) {
      return std::abs(
          mk_value(st, InequalitySetting::planar(std::vector<double>(x.data(), x.data() + x.size())), n, Units::pm_one));
    };
    SearchSpec spec = SearchSpec::uniform(2 * n, 0.0, 2 * kPi, n <= 3 ? 8 : 5);
    spec.workers = 0;
    const auto r = maximize(f, spec, 10 + n);
    o.require(std::abs(r.value - std::numbers::sqrt2) <= 1e-6, "n=" + std::to_string(n) + " " + num(r.value, 10));
    o.note("n=" + std::to_string(n) + ": " + num(r.value, 10));
  }
  o.note("tol 1e-6 of sqrt 2");
}

// 11. Chained and Scarani-Gisin.
void criterion11(Outcome& o) {
  double worst = 0;
  for (int n = 2; n <= 10; ++n) {
    const double v = chained_optimum(n).value, want = 2 * n * std::cos(kPi / (2 * n));
    worst = std::max(worst, std::abs(v - want));
  }
  o.require(worst <= 1e-9, "chained max |diff| " + num(worst));
  auto f = [](const Eigen::VectorXd& x) {
    return scarani_gisin_sum(InequalitySetting::planar(std::vector<double>(x.data(), x.data() + x.size())));
  };
  SearchSpec spec = SearchSpec::uniform(6, 0.0, 2 * kPi, 8);
  spec.workers = 0;
  const auto r = maximize(f, spec, 11);
  o.require(std::abs(r.value - 2 * std::numbers::sqrt2) <= 1e-6, "scarani-gisin " + num(r.value, 10));
  o.note("chained max |diff| " + num(worst) + " (tol 1e-9); scarani-gisin " + num(r.value, 10) + " (tol 1e-6)");
}

// 12. Hybrid tri/bi-partite expressions.
void criterion12(Outcome& o) {
  // Initial axis along z; six measurement directions in spherical angles.
  auto setting = [](const Eigen::VectorXd& x) {
    InequalitySetting s;
    for (int k = 0; k < 3; ++k)
      s.steps.push_back({UnitVector3::polar(x(4 * k), x(4 * k + 1)), UnitVector3::polar(x(4 * k + 2), x(4 * k + 3))});
    return s;
  };
  const auto st = InitialState::qubit(UnitVector3());
  const double target[4] = {3.8, -5.34, 4.8, -8.2};
  bool any = false;
  for (auto ctx : {StepTwoContext::primed, StepTwoContext::plain}) {
    double got[4];
    for (int which = 0; which < 2; ++which) {
      auto f = [&](const Eigen::VectorXd& x) {
        const auto h = hybrid_values(st, setting(x), ctx);
        return which == 0 ? h.tri_bi_1 : h.tri_bi_2;
      };
      SearchSpec spec = SearchSpec::uniform(12, 0.0, 2 * kPi, 6);
      spec.max_grid = 400000;
      spec.starts = 20;
      spec.workers = 0;
      got[2 * which] = maximize(f, spec, 12).value;
      got[2 * which + 1] = minimize(f, spec, 13).value;
    }
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && std::abs(got[i] - target[i]) <= 5e-2;
    any = any || ok;
    o.note(std::string(ctx == StepTwoContext::primed ? "a2' between" : "a2 between") + ": max/min " + num(got[0]) +
           "/" + num(got[1]) + ", " + num(got[2]) + "/" + num(got[3]));
  }
  o.require(any, "no reading reaches 3.8/-5.34 and 4.8/-8.2 within 5e-2");
}

// 13. Disentangling bound.
void criterion13(Outcome& o) {
  RandomStream r(1013, 0);
  for (int t : {1, 2}) {
    const double bound = std::pow(0.5 * t, 2);
    double worst = -1;
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> w(t + 1);
      double tot = 0;
      for (double& x : w) tot += (x = r.uniform());
      for (double& x : w) x /= tot;
      InitialState st(SpinValue(t), random_dir(r), w);
      InequalitySetting set;
      for (int i = 0; i < 3; ++i) set.steps.push_back({random_dir(r), random_dir(r)});
      worst = std::max(worst, disentangling_bound(st, set));
    }
    o.require(worst <= bound + 1e-9, "s=" + to_string(SpinValue(t)) + " max " + num(worst));
    o.note("s=" + to_string(SpinValue(t)) + ": max " + num(worst) + " vs s^2 = " + num(bound));
  }
}

// 14. Temporal protocol.
void criterion14(Outcome& o) {
  RandomStream r(1014, 0);
  auto check = [&](const TemporalEnsemble& ens, const std::vector<int>& idx, double exact, const std::string& label) {
    const auto m = temporal_moment(ens, idx);
    o.require(std::abs(m.mean - exact) <= 4 * m.stderr + 1e-12,
              label + " " + num(m.mean) + " vs " + num(exact) + " (se " + num(m.stderr) + ")");
  };
  for (int n = 2; n <= 5; ++n) {
    MeasurementSequence q;
    for (int i = 0; i < n; ++i) q.push_back(random_dir(r));
    const auto a0 = random_dir(r);
    const auto st = InitialState::qubit(a0);
    const auto ens = simulate_temporal(st, q, kRounds, 14000 + n, 0);
    const std::string tag = "n=" + std::to_string(n);
    check(ens, {1}, a0.dot(q[0]), tag + " <a1>");
    check(ens, {2}, a0.dot(q[0]) * q[0].dot(q[1]), tag + " <a2>");
    check(ens, {1, 2}, q[0].dot(q[1]), tag + " <a1 a2>");
    for (int k = 1; k < n; ++k) {
      // <alpha_{n-k} ... alpha_n>: k odd -> adjacent cosines only, k even -> also <alpha_{n-k}>.
      std::vector<int> idx;
      for (int i = n - k; i <= n; ++i) idx.push_back(i);
      double exact = 1;
      for (int i = n; i > n - k; i -= 2) exact *= q[i - 2].dot(q[i - 1]);
      if (k % 2 == 0) {
        double first = a0.dot(q[0]);
        for (int i = 1; i < n - k; ++i) first *= q[i - 1].dot(q[i]);
        exact *= first;
      }
      check(ens, idx, exact, tag + " last-" + std::to_string(k));
    }
    for (int i = 2; i <= n; ++i) o.require(transcript_leakage_bits(ens, i) < 1e-3, tag + " transcript leakage");
  }
  // a0 orthogonal to a1: odd-length full moments vanish.
  const UnitVector3 a0(0, 0, 1);
  MeasurementSequence q{UnitVector3(1, 0, 0), random_dir(r), random_dir(r)};
  const auto ens = simulate_temporal(InitialState::qubit(a0), q, kRounds, 14100, 0);
  check(ens, {1}, 0.0, "orthogonal <a1>");
  check(ens, {1, 2, 3}, 0.0, "orthogonal <a1 a2 a3>");
  o.note("n = 2..5 at 1e6 rounds, 4 sigma; transcript leakage < 1e-3 bits");
}

// 15. Closed forms against the projector-chain oracle.
void criterion15(Outcome& o) {
  RandomStream r(1015, 0);
  const char* names[] = {"corr2", "second_moment2", "corr3", "corr13", "corr23"};
  double worst[5] = {0, 0, 0, 0, 0};
  for (int k = 0; k < 100; ++k) {
    const SpinValue s(1 + k % 6);
    std::vector<double> w(s.dim());
    double tot = 0;
    for (double& x : w) tot += (x = r.uniform());
    for (double& x : w) x /= tot;
    InitialState st(s, random_dir(r), w, 0.5 * r.uniform());
    MeasurementSequence q{random_dir(r), random_dir(r), random_dir(r)};
    const double d[5] = {
        corr2(st, q[0], q[1]) - successive_oracle(st, {q[0], q[1]}, {1, 1}),
        second_moment2(st, q[0], q[1]) - successive_oracle(st, {q[0], q[1]}, {0, 2}),
        corr3(st, q[0], q[1], q[2]) - successive_oracle(st, q, {1, 1, 1}),
        corr13(st, q[0], q[1], q[2]) - successive_oracle(st, q, {1, 0, 1}),
        corr23(st, q[0], q[1], q[2]) - successive_oracle(st, q, {0, 1, 1}),
    };
    for (int i = 0; i < 5; ++i) worst[i] = std::max(worst[i], std::abs(d[i]));
  }
  for (int i = 0; i < 5; ++i) {
    o.require(worst[i] <= 1e-9, std::string(names[i]) + " " + num(worst[i]));
    o.note(std::string(names[i]) + " " + num(worst[i], 3));
  }
  o.note("100 instances each, s <= 3, tol 1e-9");
}

// 16. Cabello and Hardy maxima.
void criterion16(Outcome& o) {
  const auto c2 = cabello_global_max(0);
  o.require(std::abs(c2.value - 0.1078) <= 1e-3 && std::abs(c2.cos_beta - 0.485) <= 1e-2,
            "two-probability " + num(c2.value) + " at cos(beta) " + num(c2.cos_beta));
  const auto c3 = cabello3_global_max(0);
  o.require(std::abs(c3.value - 0.1588) <= 2e-3, "three-probability value " + num(c3.value));
  o.require(std::abs(c3.cos_beta - 0.95) <= 1e-2, "three-probability location cos(beta) " + num(c3.cos_beta));
  double me = -1;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j)
      for (int branch : {-1, 1})
        me = std::max(me, cabello_objective({kPi / 4, 0.0}, -kPi + i * kPi / 20, -kPi + j * kPi / 20, branch));
  me = std::max(me, cabello_max_at(kPi / 4, 0).value);
  o.require(me <= 1e-9, "maximally entangled " + num(me));
  const auto h = hardy_global_max();
  const double ratio = h.cos_beta > 0 ? std::sqrt(1 - h.cos_beta * h.cos_beta) / h.cos_beta : 0;
  const double folded = ratio > 1 ? 1 / ratio : ratio;
  o.require(std::abs(h.value - 0.090) <= 5e-3 && std::abs(folded - 0.46) <= 2e-2,
            "hardy " + num(h.value) + " at ratio " + num(folded));
  o.note("two-probability " + num(c2.value) + " at cos(beta) " + num(c2.cos_beta) + "; three-probability " +
         num(c3.value) + " at cos(beta) " + num(c3.cos_beta) + "; beta=pi/4 max " + num(me, 3) + "; hardy " +
         num(h.value) + " at ratio " + num(folded));
}

// 17. CLI determinism.
void criterion17(Outcome& o) {
#ifndef SPINSIM_CLI_PATH
  o.require(false, "CLI path not configured");
#else
  namespace fs = std::filesystem;
  const std::string cli = SPINSIM_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> runs{
      {"tb.csv", "simulate --protocol toner-bacon --a 0,0,1 --b 1,0,0 --rounds 200000 --seed 7"},
      {"bin.json", "simulate --protocol binary --s 5/2 --a 0,0.6,0.8 --b 1,0,0 --rounds 200000 --seed 9 --format json"},
      {"padic.csv", "simulate --protocol padic --P 3 --n 2 --a 0,1,0 --b 1,1,1 --rounds 200000"},
      {"nonmax.json", "simulate --protocol nonmax --gamma 0.3 --a 1,0,0 --b 0,1,0 --rounds 200000 --format json"},
      {"t2.csv", "tables --table 2"},
      {"t3.json", "tables --table 3 --format json"},
      {"stair.csv", "staircase --s-min 1/2 --s-max 6"},
      {"nl.csv", "nonlocality --cos-beta 0.485,0.707106781187,1"},
  };
  const fs::path root = fs::temp_directory_path() / ("spinsim_acc_" + std::to_string(::getpid()));
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const char* pass : {"a", "b"}) fs::create_directories(root / pass);
  for (const auto& [file, args] : runs) {
    std::string first;
    for (const char* pass : {"a", "b"}) {
      // The second pass also changes the worker count; output must not depend on it.
      const std::string workers = std::string(pass) == "a" ? " --workers 1" : " --workers 3";
      const fs::path out = root / pass / file;
      const std::string cmd = "\"" + cli + "\" " + args + workers + " --out \"" + out.string() + "\"";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, file + " exit status " + std::to_string(rc));
    }
    const std::string a = read(root / "a" / file), b = read(root / "b" / file);
    o.require(!a.empty() && a == b, file + " differs between runs");
  }
  fs::remove_all(root);
  o.note(std::to_string(runs.size()) + " CLI invocations byte-identical across reruns and worker counts");
#endif
}

const std::function<void(Outcome&)> kCriteria[] = {
    criterion1,  criterion2,  criterion3,  criterion4,  criterion5,  criterion6,  criterion7,  criterion8, criterion9,
    criterion10, criterion11, criterion12, criterion13, criterion14, criterion15, criterion16, criterion17};

bool run(int id) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    kCriteria[id - 1](o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "Criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << num(secs, 3) << " s)"
            << o.detail.str() << std::endl;
  return o.pass;
}

} // namespace

int main(int argc, char** argv) {
  constexpr int n = static_cast<int>(std::size(kCriteria));
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int id = std::atoi(argv[2]);
    if (id < 1 || id > n) {
      std::cerr << "criterion must be 1.." << n << '\n';
      return 2;
    }
    return run(id) ? 0 : 1;
  }
  if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }
  bool all = true;
  for (int id = 1; id <= n; ++id) all = run(id) && all;
  return all ? 0 : 1;
}
