#pragma once

// Dormand-Prince 8(5,3) embedded Runge-Kutta integrator for complex-valued
// states over a real parameter interval.  Step-size control follows Hairer,
// Norsett & Wanner, "Solving Ordinary Differential Equations I".

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "monodromy/errors.hpp"

namespace monodromy::ode {

using State = std::vector<std::complex<double>>;

struct StepperOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  double min_step = 1e-14;    // relative to the interval length
  std::size_t max_steps = 2'000'000;
};

struct StepperStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

namespace dp853 {
// clang-format off
inline constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
  c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
  c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00, c8 = 0.307692307692307692307692307692E+00,
  c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
inline constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
  b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
  b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
  b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
inline constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
  bhh3 = 0.220588235294117647058823529412E-01;
inline constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
  er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
  er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
  er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;
inline constexpr double a21 = 5.26001519587677318785587544488E-2,
  a31 = 1.97250569845378994544595329183E-2, a32 = 5.91751709536136983633785987549E-2,
  a41 = 2.95875854768068491816892993775E-2, a43 = 8.87627564304205475450678981324E-2,
  a51 = 2.41365134159266685502369798665E-1, a53 = -8.84549479328286085344864962717E-1,
  a54 = 9.24834003261792003115737966543E-1,
  a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
  a65 = 1.25467687566822425016691814123E-1,
  a71 = 3.7109375E-2, a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
  a76 = -1.7578125E-2,
  a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
  a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
  a87 = 8.27378916381402288758473766002E-3,
  a91 = 6.24110958716075717114429577812E-1, a94 = -3.36089262944694129406857109825E0,
  a95 = -8.68219346841726006818189891453E-1, a96 = 2.75920996994467083049415600797E1,
  a97 = 2.01540675504778934086186788979E1, a98 = -4.34898841810699588477366255144E1,
  a101 = 4.77662536438264365890433908527E-1, a104 = -2.48811461997166764192642586468E0,
  a105 = -5.90290826836842996371446475743E-1, a106 = 2.12300514481811942347288949897E1,
  a107 = 1.52792336328824235832596922938E1, a108 = -3.32882109689848629194453265587E1,
  a109 = -2.03312017085086261358222928593E-2,
  a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
  a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
  a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
  a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
  a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
  a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
  a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
  a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
  a1211 = 6.43392746015763530355970484046E-1;
// clang-format on
}  // namespace dp853

/// Integrates dy/ds = rhs(s, y) from s0 to s1 (s1 > s0).
///
/// `rhs(double s, const State& y, State& dy)`; `on_step(double s, const State& y)`
/// is called after every accepted step, including the final one.
template <class Rhs, class OnStep>
StepperStats integrate_dop853(Rhs&& rhs, State& y, double s0, double s1, const StepperOptions& opt,
                              OnStep&& on_step) {
  using namespace dp853;
  const std::size_t n = y.size();
  StepperStats stats;
  if (n == 0 || s1 <= s0) return stats;

  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n), tmp(n), y_new(n);
  const double span = s1 - s0;
  double s = s0;
  double step = opt.initial_step > 0.0 ? opt.initial_step : 0.01 * span;
  rhs(s, y, k1);
  ++stats.evaluations;
  bool last_rejected = false;

  auto combo = [&](auto&& f) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * f(i);
  };

  while (s < s1) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw StiffnessError("integrator: step budget exhausted");
    }
    if (step < opt.min_step * span) throw StiffnessError("integrator: step size underflow");
    bool final_step = false;
    if (s + step >= s1 || s + 1.01 * step >= s1) {
      step = s1 - s;
      final_step = true;
    }

    combo([&](std::size_t i) { return a21 * k1[i]; });
    rhs(s + c2 * step, tmp, k2);
    combo([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    rhs(s + c3 * step, tmp, k3);
    combo([&](std::size_t i) { return a41 * k1[i] + a43 * k3[i]; });
    rhs(s + c4 * step, tmp, k4);
    combo([&](std::size_t i) { return a51 * k1[i] + a53 * k3[i] + a54 * k4[i]; });
    rhs(s + c5 * step, tmp, k5);
    combo([&](std::size_t i) { return a61 * k1[i] + a64 * k4[i] + a65 * k5[i]; });
    rhs(s + c6 * step, tmp, k6);
    combo([&](std::size_t i) { return a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]; });
    rhs(s + c7 * step, tmp, k7);
    combo([&](std::size_t i) {
      return a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i];
    });
    rhs(s + c8 * step, tmp, k8);
    combo([&](std::size_t i) {
      return a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i];
    });
    rhs(s + c9 * step, tmp, k9);
    combo([&](std::size_t i) {
      return a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
             a108 * k8[i] + a109 * k9[i];
    });
    rhs(s + c10 * step, tmp, k10);
    combo([&](std::size_t i) {
      return a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
             a118 * k8[i] + a119 * k9[i] + a1110 * k10[i];
    });
    rhs(s + c11 * step, tmp, k2);
    const double s_next = final_step ? s1 : s + step;
    combo([&](std::size_t i) {
      return a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
             a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k2[i];
    });
    rhs(s_next, tmp, k3);
    stats.evaluations += 11;

    double err5 = 0.0, err3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<double> incr = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] +
                                        b9 * k9[i] + b10 * k10[i] + b11 * k2[i] + b12 * k3[i];
      y_new[i] = y[i] + step * incr;
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const std::complex<double> e3 = incr - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k3[i];
      const std::complex<double> e5 = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] +
                                      er9 * k9[i] + er10 * k10[i] + er11 * k2[i] + er12 * k3[i];
      err3 += std::norm(e3) / (scale * scale);
      err5 += std::norm(e5) / (scale * scale);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    const double err = step * err5 / std::sqrt(deno * static_cast<double>(n));

    const double fac11 = std::pow(err, 0.125);
    double fac = std::clamp(fac11 / 0.9, 1.0 / 6.0, 1.0 / 0.333);
    if (!std::isfinite(err)) fac = 6.0;

    if (err <= 1.0) {
      ++stats.accepted;
      s = s_next;
      y.swap(y_new);
      on_step(s, y);
      if (final_step) break;
      rhs(s, y, k1);
      ++stats.evaluations;
      double next = step / fac;
      if (last_rejected) next = std::min(next, step);
      last_rejected = false;
      step = next;
    } else {
      ++stats.rejected;
      last_rejected = true;
      step = step / fac;
    }
  }
  return stats;
}

}  // namespace monodromy::ode
