#pragma once

// Explicit Runge-Kutta pair of order 8(5,3) by Dormand and Prince with the
// seventh-order continuous extension (Hairer, Norsett & Wanner, "Solving
// Ordinary Differential Equations I", 2nd ed., code DOP853). Fixed-size state,
// one accepted step per call so that callers can inspect the dense output
// between steps (event location, uniform sampling).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>

#include "largen/error.hpp"

namespace largen::ode {

struct StepperConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct StepperStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

template <std::size_t N>
class Dop853 {
 public:
  using Vec = std::array<double, N>;
  // Writes dy/dt. Returning false marks the state as outside the domain of the
  // right-hand side; the trial step is then rejected with a smaller step size.
  using Rhs = std::function<bool(double t, const Vec& y, Vec& dydt)>;

  Dop853(Rhs rhs, StepperConfig config) : rhs_(std::move(rhs)), cfg_(config) {
    if (!(cfg_.rtol > 0.0) || !(cfg_.atol > 0.0))
      throw Error(ErrorKind::Config, "integrator tolerances must be > 0");
    if (!(cfg_.max_step > 0.0)) throw Error(ErrorKind::Config, "max_step must be > 0");
  }

  void reset(double t0, const Vec& y0) {
    t_ = t0;
    t_old_ = t0;
    y_ = y0;
    h_ = 0.0;
    facold_ = 1e-4;
    reject_ = false;
    dense_ready_ = false;
    stats_ = {};
    if (!eval(t_, y_, k_[0]))
      throw Error(ErrorKind::Domain, "initial state lies outside the domain of the equations");
  }

  double time() const { return t_; }
  double previous_time() const { return t_old_; }
  const Vec& state() const { return y_; }
  const StepperStats& stats() const { return stats_; }

  // Takes one accepted step toward t_stop (> time()), never stepping past it.
  // Returns true once time() == t_stop.
  bool step_toward(double t_stop) {
    if (!(t_stop > t_)) return true;
    if (h_ == 0.0) h_ = initial_step(t_stop - t_);

    for (;;) {
      if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
        throw Error(ErrorKind::Numerical, "integrator exceeded the maximum number of steps");
      if (0.1 * std::abs(h_) <= std::abs(t_) * kUround || h_ < std::numeric_limits<double>::min())
        throw Error(ErrorKind::Numerical, "integrator step size underflow at t = " + std::to_string(t_));

      double h = std::min(h_, cfg_.max_step);
      bool last = false;
      if (t_ + 1.01 * h >= t_stop) {
        h = t_stop - t_;
        last = true;
      }

      Vec y_new;
      double err = 0.0;
      const bool in_domain = trial_step(h, y_new, err);
      if (!in_domain) {
        h_ = 0.25 * h;
        reject_ = true;
        ++stats_.rejected;
        continue;
      }

      const double fac11 = std::pow(err, 0.125);
      const double fac = std::clamp(fac11 / kSafe, kFacc2, kFacc1);
      double h_new = h / fac;

      if (err <= 1.0) {
        Vec f_new;
        if (!eval(t_ + h, y_new, f_new)) {
          h_ = 0.25 * h;
          reject_ = true;
          ++stats_.rejected;
          continue;
        }
        facold_ = std::max(err, 1e-4);
        ++stats_.accepted;

        // Keep what the continuous extension needs.
        y_old_ = y_;
        h_step_ = h;
        t_old_ = t_;
        k_[kSaved] = k_[0];
        k_[12] = f_new;
        dense_ready_ = false;

        y_ = y_new;
        t_ = last ? t_stop : t_ + h;
        k_[0] = f_new;

        if (std::abs(h_new) > cfg_.max_step) h_new = cfg_.max_step;
        if (reject_) h_new = std::min(h_new, h);
        reject_ = false;
        h_ = h_new;
        return last;
      }

      h_ = h / std::min(kFacc1, fac11 / kSafe);
      reject_ = true;
      if (stats_.accepted >= 1) ++stats_.rejected;
    }
  }

  // Seventh-order interpolant on [previous_time(), time()].
  Vec dense(double t) {
    if (stats_.accepted == 0) return y_;
    if (!dense_ready_) prepare_dense();
    const double s = (t - t_old_) / h_step_;
    const double s1 = 1.0 - s;
    Vec out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = rc_[0][i] +
               s * (rc_[1][i] +
                    s1 * (rc_[2][i] +
                          s * (rc_[3][i] + s1 * (rc_[4][i] + s * (rc_[5][i] + s1 * (rc_[6][i] + s * rc_[7][i]))))));
    }
    return out;
  }

 private:
  static constexpr double kUround = 2.3e-16;
  static constexpr double kSafe = 0.9;
  static constexpr double kFacc1 = 1.0 / 0.333;
  static constexpr double kFacc2 = 1.0 / 6.0;

  bool eval(double t, const Vec& y, Vec& f) {
    ++stats_.evaluations;
    if (!rhs_(t, y, f)) return false;
    for (double v : f) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double initial_step(double span) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = cfg_.atol + cfg_.rtol * std::abs(y_[i]);
      dnf += (k_[0][i] / sk) * (k_[0][i] / sk);
      dny += (y_[i] / sk) * (y_[i] / sk);
    }
    const double hmax = std::min(cfg_.max_step, span);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);

    Vec y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + h * k_[0][i];
    if (!eval(t_ + h, y1, f1)) return std::min(1e-6, hmax);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double q = (f1[i] - k_[0][i]) / (cfg_.atol + cfg_.rtol * std::abs(y_[i]));
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.125);
    return std::min({100.0 * h, h1, hmax});
  }

  // Stages k_[1..11]; k_[0] holds f(t, y). Writes the eighth-order solution and
  // the scaled error norm. Returns false if a stage left the domain.
  bool trial_step(double h, Vec& y_new, double& err_out) {
    auto& k = k_;
    Vec w;
    auto stage = [&](std::size_t idx, double c, std::initializer_list<std::pair<std::size_t, double>> a) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (const auto& [j, aj] : a) acc += aj * k[j][i];
        w[i] = y_[i] + h * acc;
      }
      return eval(t_ + c * h, w, k[idx]);
    };

    if (!stage(1, c2, {{0, a21}})) return false;
    if (!stage(2, c3, {{0, a31}, {1, a32}})) return false;
    if (!stage(3, c4, {{0, a41}, {2, a43}})) return false;
    if (!stage(4, c5, {{0, a51}, {2, a53}, {3, a54}})) return false;
    if (!stage(5, c6, {{0, a61}, {3, a64}, {4, a65}})) return false;
    if (!stage(6, c7, {{0, a71}, {3, a74}, {4, a75}, {5, a76}})) return false;
    if (!stage(7, c8, {{0, a81}, {3, a84}, {4, a85}, {5, a86}, {6, a87}})) return false;
    if (!stage(8, c9, {{0, a91}, {3, a94}, {4, a95}, {5, a96}, {6, a97}, {7, a98}})) return false;
    if (!stage(9, c10, {{0, a101}, {3, a104}, {4, a105}, {5, a106}, {6, a107}, {7, a108}, {8, a109}})) return false;
    if (!stage(10, c11,
               {{0, a111}, {3, a114}, {4, a115}, {5, a116}, {6, a117}, {7, a118}, {8, a119}, {9, a1110}}))
      return false;
    if (!stage(11, 1.0,
               {{0, a121},
                {3, a124},
                {4, a125},
                {5, a126},
                {6, a127},
                {7, a128},
                {8, a129},
                {9, a1210},
                {10, a1211}}))
      return false;

    // Hairer's blend of the 5th- and 3rd-order estimates, taken per component
    // and reduced with the max norm so every component meets its tolerance.
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double incr = b1 * k[0][i] + b6 * k[5][i] + b7 * k[6][i] + b8 * k[7][i] + b9 * k[8][i] +
                          b10 * k[9][i] + b11 * k[10][i] + b12 * k[11][i];
      y_new[i] = y_[i] + h * incr;
      if (!std::isfinite(y_new[i])) return false;
      const double sk = 1.0 / (cfg_.atol + cfg_.rtol * std::max(std::abs(y_[i]), std::abs(y_new[i])));
      const double e3 = (incr - bhh1 * k[0][i] - bhh2 * k[8][i] - bhh3 * k[11][i]) * sk;
      const double e5 = (er1 * k[0][i] + er6 * k[5][i] + er7 * k[6][i] + er8 * k[7][i] + er9 * k[8][i] +
                         er10 * k[9][i] + er11 * k[10][i] + er12 * k[11][i]) *
                        sk;
      const double deno = e5 * e5 + 0.01 * e3 * e3;
      if (deno > 0.0) worst = std::max(worst, e5 * e5 / std::sqrt(deno));
    }
    err_out = std::abs(h) * worst;
    return true;
  }

  void prepare_dense() {
    auto& k = k_;
    const double h = h_step_;
    const Vec& y0 = y_old_;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = y_[i] - y0[i];
      const double bspl = h * k[kSaved][i] - ydiff;
      rc_[0][i] = y0[i];
      rc_[1][i] = ydiff;
      rc_[2][i] = bspl;
      rc_[3][i] = ydiff - h * k[12][i] - bspl;
      rc_[4][i] = d41 * k[kSaved][i] + d46 * k[5][i] + d47 * k[6][i] + d48 * k[7][i] + d49 * k[8][i] +
                  d410 * k[9][i] + d411 * k[10][i] + d412 * k[11][i];
      rc_[5][i] = d51 * k[kSaved][i] + d56 * k[5][i] + d57 * k[6][i] + d58 * k[7][i] + d59 * k[8][i] +
                  d510 * k[9][i] + d511 * k[10][i] + d512 * k[11][i];
      rc_[6][i] = d61 * k[kSaved][i] + d66 * k[5][i] + d67 * k[6][i] + d68 * k[7][i] + d69 * k[8][i] +
                  d610 * k[9][i] + d611 * k[10][i] + d612 * k[11][i];
      rc_[7][i] = d71 * k[kSaved][i] + d76 * k[5][i] + d77 * k[6][i] + d78 * k[7][i] + d79 * k[8][i] +
                  d710 * k[9][i] + d711 * k[10][i] + d712 * k[11][i];
    }

    Vec w, k14, k15, k16;
    const Vec& k1 = k[kSaved];
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y0[i] + h * (a141 * k1[i] + a147 * k[6][i] + a148 * k[7][i] + a149 * k[8][i] + a1410 * k[9][i] +
                          a1411 * k[10][i] + a1412 * k[11][i] + a1413 * k[12][i]);
    eval(t_old_ + c14 * h, w, k14);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y0[i] + h * (a151 * k1[i] + a156 * k[5][i] + a157 * k[6][i] + a158 * k[7][i] + a1511 * k[10][i] +
                          a1512 * k[11][i] + a1513 * k[12][i] + a1514 * k14[i]);
    eval(t_old_ + c15 * h, w, k15);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = y0[i] + h * (a161 * k1[i] + a166 * k[5][i] + a167 * k[6][i] + a168 * k[7][i] + a169 * k[8][i] +
                          a1613 * k[12][i] + a1614 * k14[i] + a1615 * k15[i]);
    eval(t_old_ + c16 * h, w, k16);

    for (std::size_t i = 0; i < N; ++i) {
      rc_[4][i] = h * (rc_[4][i] + d413 * k[12][i] + d414 * k14[i] + d415 * k15[i] + d416 * k16[i]);
      rc_[5][i] = h * (rc_[5][i] + d513 * k[12][i] + d514 * k14[i] + d515 * k15[i] + d516 * k16[i]);
      rc_[6][i] = h * (rc_[6][i] + d613 * k[12][i] + d614 * k14[i] + d615 * k15[i] + d616 * k16[i]);
      rc_[7][i] = h * (rc_[7][i] + d713 * k[12][i] + d714 * k14[i] + d715 * k15[i] + d716 * k16[i]);
    }
    dense_ready_ = true;
  }

  // k_[0] is overwritten with f(t_new, y_new) on acceptance; the derivative at
  // the start of the accepted step is kept in k_[kSaved].
  static constexpr std::size_t kSaved = 13;

  Rhs rhs_;
  StepperConfig cfg_;
  double t_ = 0.0;
  double t_old_ = 0.0;
  double h_ = 0.0;
  double h_step_ = 0.0;
  double facold_ = 1e-4;
  bool reject_ = false;
  bool dense_ready_ = false;
  Vec y_{};
  Vec y_old_{};
  std::array<Vec, 14> k_{};
  std::array<Vec, 8> rc_{};
  StepperStats stats_;

  // clang-format off
  static constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
      c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
      c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00, c8 = 0.307692307692307692307692307692E+00,
      c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00,
      c14 = 0.1E+00, c15 = 0.2E+00, c16 = 0.777777777777777777777777777778E+00;

  static constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
      b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
      b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
      b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;

  static constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
      bhh3 = 0.220588235294117647058823529412E-01;

  static constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
      er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
      er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
      er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;

  static constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
      a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
      a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
      a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
      a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
      a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2, a74 = 1.70252211019544039314978060272E-1,
      a75 = 6.02165389804559606850219397283E-2, a76 = -1.7578125E-2, a81 = 3.70920001185047927108779319836E-2,
      a84 = 1.70383925712239993810214054705E-1, a85 = 1.07262030446373284651809199168E-1,
      a86 = -1.53194377486244017527936158236E-2, a87 = 8.27378916381402288758473766002E-3,
      a91 = 6.24110958716075717114429577812E-1, a94 = -3.36089262944694129406857109825E0,
      a95 = -8.68219346841726006818189891453E-1, a96 = 2.75920996994467083049415600797E1,
      a97 = 2.01540675504778934086186788979E1, a98 = -4.34898841810699588477366255144E1,
      a101 = 4.77662536438264365890433908527E-1, a104 = -2.48811461997166764192642586468E0,
      a105 = -5.90290826836842996371446475743E-1, a106 = 2.12300514481811942347288949897E1,
      a107 = 1.52792336328824235832596922938E1, a108 = -3.32882109689848629194453265587E1,
      a109 = -2.03312017085086261358222928593E-2, a111 = -9.3714243008598732571704021658E-1,
      a114 = 5.18637242884406370830023853209E0, a115 = 1.09143734899672957818500254654E0,
      a116 = -8.14978701074692612513997267357E0, a117 = -1.85200656599969598641566180701E1,
      a118 = 2.27394870993505042818970056734E1, a119 = 2.49360555267965238987089396762E0,
      a1110 = -3.0467644718982195003823669022E0, a121 = 2.27331014751653820792359768449E0,
      a124 = -1.05344954667372501984066689879E1, a125 = -2.00087205822486249909675718444E0,
      a126 = -1.79589318631187989172765950534E1, a127 = 2.79488845294199600508499808837E1,
      a128 = -2.85899827713502369474065508674E0, a129 = -8.87285693353062954433549289258E0,
      a1210 = 1.23605671757943030647266201528E1, a1211 = 6.43392746015763530355970484046E-1;

  static constexpr double a141 = 5.61675022830479523392909219681E-2, a147 = 2.53500210216624811088794765333E-1,
      a148 = -2.46239037470802489917441475441E-1, a149 = -1.24191423263816360469010140626E-1,
      a1410 = 1.5329179827876569731206322685E-1, a1411 = 8.20105229563468988491666602057E-3,
      a1412 = 7.56789766054569976138603589584E-3, a1413 = -8.298E-3,
      a151 = 3.18346481635021405060768473261E-2, a156 = 2.83009096723667755288322961402E-2,
      a157 = 5.35419883074385676223797384372E-2, a158 = -5.49237485713909884646569340306E-2,
      a1511 = -1.08347328697249322858509316994E-4, a1512 = 3.82571090835658412954920192323E-4,
      a1513 = -3.40465008687404560802977114492E-4, a1514 = 1.41312443674632500278074618366E-1,
      a161 = -4.28896301583791923408573538692E-1, a166 = -4.69762141536116384314449447206E0,
      a167 = 7.68342119606259904184240953878E0, a168 = 4.06898981839711007970213554331E0,
      a169 = 3.56727187455281109270669543021E-1, a1613 = -1.39902416515901462129418009734E-3,
      a1614 = 2.9475147891527723389556272149E0, a1615 = -9.15095847217987001081870187138E0;

  static constexpr double d41 = -0.84289382761090128651353491142E+01, d46 = 0.56671495351937776962531783590E+00,
      d47 = -0.30689499459498916912797304727E+01, d48 = 0.23846676565120698287728149680E+01,
      d49 = 0.21170345824450282767155149946E+01, d410 = -0.87139158377797299206789907490E+00,
      d411 = 0.22404374302607882758541771650E+01, d412 = 0.63157877876946881815570249290E+00,
      d413 = -0.88990336451333310820698117400E-01, d414 = 0.18148505520854727256656404962E+02,
      d415 = -0.91946323924783554000451984436E+01, d416 = -0.44360363875948939664310572000E+01;
  static constexpr double d51 = 0.10427508642579134603413151009E+02, d56 = 0.24228349177525818288430175319E+03,
      d57 = 0.16520045171727028198505394887E+03, d58 = -0.37454675472269020279518312152E+03,
      d59 = -0.22113666853125306036270938578E+02, d510 = 0.77334326684722638389603898808E+01,
      d511 = -0.30674084731089398182061213626E+02, d512 = -0.93321305264302278729567221706E+01,
      d513 = 0.15697238121770843886131091075E+02, d514 = -0.31139403219565177677282850411E+02,
      d515 = -0.93529243588444783865713862664E+01, d516 = 0.35816841486394083752465898540E+02;
  static constexpr double d61 = 0.19985053242002433820987653617E+02, d66 = -0.38703730874935176555105901742E+03,
      d67 = -0.18917813819516756882830838328E+03, d68 = 0.52780815920542364900561016686E+03,
      d69 = -0.11573902539959630126141871134E+02, d610 = 0.68812326946963000169666922661E+01,
      d611 = -0.10006050966910838403183860980E+01, d612 = 0.77771377980534432092869265740E+00,
      d613 = -0.27782057523535084065932004339E+01, d614 = -0.60196695231264120758267380846E+02,
      d615 = 0.84320405506677161018159903784E+02, d616 = 0.11992291136182789328035130030E+02;
  static constexpr double d71 = -0.25693933462703749003312586129E+02, d76 = -0.15418974869023643374053993627E+03,
      d77 = -0.23152937917604549567536039109E+03, d78 = 0.35763911791061412378285349910E+03,
      d79 = 0.93405324183624310003907691704E+02, d710 = -0.37458323136451633156875139351E+02,
      d711 = 0.10409964950896230045147246184E+03, d712 = 0.29840293426660503123344363579E+02,
      d713 = -0.43533456590011143754432175058E+02, d714 = 0.96324553959188282948394950600E+02,
      d715 = -0.39177261675615439165231486172E+02, d716 = -0.14972683625798562581422125276E+03;
  // clang-format on
};

}  // namespace largen::ode
