#include "selfconf/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "selfconf/error.hpp"

namespace selfconf {

namespace {

bool is_two(double alpha) { return alpha == 2.0; }
bool is_four(double alpha) { return alpha == 4.0; }

// Received-power scale at the far edge of the distance band.
double far_scale(const BoundInputs& in) {
  return std::pow(in.l_th * (1.0 + in.epsilon0), in.chan.alpha / 2.0);
}

// Residual-interference prefactor without P.
double ring_prefactor(const BoundInputs& in) {
  const double rc = in.nbhd.contention_range;
  return 4.0 * kPi / (rc * rc * far_scale(in));
}

// (b^x - a^x) / x computed as a^x expm1(x ln(b/a)) / x.
double power_difference(double a, double b, double x) {
  return std::pow(a, x) * std::expm1(x * std::log(b / a)) / x;
}

// Bracket of the residual bound for alpha != 4.
double ring_bracket(double alpha, double c, double rc, double n, double l) {
  const double x = (4.0 - alpha) / 2.0;
  const double inner = std::sqrt(c) * rc;
  const double outer = inner + std::sqrt(n * l * rc);
  return std::pow(c, (2.0 - alpha) / 4.0) * std::pow(rc, x) + power_difference(inner, outer, x);
}

double ring_bracket_four(double c, double rc, double n, double l) {
  return 1.0 / std::sqrt(c) + std::log1p(std::sqrt(n * l / (c * rc)));
}

// I3 / P for a given complexity exponent divisor (4 for the integral value,
// 2 for the printed exponent).
double i3_per_power(const BoundInputs& in, double divisor) {
  const double alpha = in.chan.alpha;
  const double rc = in.nbhd.contention_range;
  const double c = complexity(in.nbhd);
  const double scale = 2.0 * std::pow(rc, -alpha);
  if (is_two(alpha)) {
    const double t = 1.0 + 0.5 * std::log(c);
    return scale * t * t;
  }
  const double gap = alpha - 2.0;
  // alpha - 2 C^((2-alpha)/divisor), written to stay accurate near alpha = 2
  const double head = gap - 2.0 * std::expm1(-gap / divisor * std::log(c));
  return scale * head * head / (gap * gap);
}

// Radicand of the SINR-feasibility square root.
double feasibility_radicand(const BoundInputs& in) {
  const auto& ch = in.chan;
  return std::pow(in.l_th * (1.0 - in.epsilon0), -ch.alpha) / ch.sinr_threshold -
         ch.noise_power / ch.tx_power;
}

double display_prefactor(const BoundInputs& in) {
  const auto& ch = in.chan;
  const double l = in.l_th;
  const double root = std::sqrt(std::pow(l, -ch.alpha) / ch.sinr_threshold -
                                ch.noise_power / ch.tx_power);
  return 2.0 * std::pow(l, ch.alpha / 2.0) / (std::pow(l, -ch.alpha / 2.0) - root);
}

double display_epsilon(const BoundInputs& in) {
  const double alpha = in.chan.alpha;
  const double rc = in.nbhd.contention_range;
  const double l = in.l_th;
  const double n = in.n_nodes;
  const double c = complexity(in.nbhd);
  const double lead = display_prefactor(in) / (rc * rc);
  const double spread = 4.0 * kPi / (l * l);
  if (is_two(alpha)) {
    const double t = 2.0 + std::log(c);
    return lead * (t * t + spread * (rc + std::sqrt(n * l * rc)));
  }
  if (is_four(alpha)) {
    const double t = 2.0 - 1.0 / alpha;
    return lead * (2.0 * t * t / (rc * rc) + spread * ring_bracket_four(c, rc, n, l));
  }
  const double head = alpha - 2.0 * std::pow(c, (2.0 - alpha) / 2.0);
  const double first =
      2.0 * head * head / ((alpha - 2.0) * (alpha - 2.0) * std::pow(rc, alpha - 2.0));
  return lead * (first + spread * ring_bracket(alpha, c, rc, n, l));
}

}  // namespace

void BoundInputs::validate() const {
  chan.validate();
  nbhd.validate();
  if (!(epsilon0 >= 0.0 && epsilon0 < 1.0)) throw ValidationError("bounds.epsilon0 must be in [0, 1)");
  if (!(n_nodes >= 2.0)) throw ValidationError("bounds.n_nodes must be >= 2");
  if (!(l_th > 0.0)) throw ValidationError("bounds.l_th must be > 0");
  if (!(l_th * (1.0 + epsilon0) < nbhd.contention_range))
    throw ValidationError("neighborhood.contention_range must exceed l_th (1 + epsilon0)");
}

double complexity(const NeighborhoodParams& nbhd) {
  if (!(nbhd.contention_range > 0.0)) throw ValidationError("neighborhood.contention_range must be > 0");
  const double ratio = nbhd.interference_range / nbhd.contention_range;
  return ratio * ratio;
}

double i3_bound(const BoundInputs& in) {
  in.validate();
  return in.chan.tx_power * i3_per_power(in, 4.0);
}

double ring_count(const BoundInputs& in) {
  in.validate();
  const double rc = in.nbhd.contention_range;
  const double rf = in.nbhd.interference_range;
  const double need = (in.n_nodes - 2.0) * in.l_th * (1.0 + in.epsilon0) / rc;
  if (need <= 0.0) return 0;
  // rings 1..K hold 2 pi (K r_f + r_c K (K - 1) / 2) / r_c dipoles
  const auto capacity = [&](double k) { return 2.0 * kPi * (k * rf + rc * k * (k - 1.0) / 2.0) / rc; };
  const double a = kPi;
  const double b = 2.0 * kPi * (rf - rc / 2.0) / rc;
  double k = std::ceil((-b + std::sqrt(b * b + 4.0 * a * need)) / (2.0 * a));
  k = std::max(k, 1.0);
  if (k < 0x1p52) {
    while (k > 1.0 && capacity(k - 1.0) >= need) k -= 1.0;
    while (capacity(k) < need) k += 1.0;
  }
  return k;
}

double ir_bound(const BoundInputs& in) {
  in.validate();
  if (ring_count(in) == 0) return 0.0;
  const double alpha = in.chan.alpha;
  const double rc = in.nbhd.contention_range;
  const double c = complexity(in.nbhd);
  const double bracket = is_four(alpha) ? ring_bracket_four(c, rc, in.n_nodes, in.l_th)
                                        : ring_bracket(alpha, c, rc, in.n_nodes, in.l_th);
  return in.chan.tx_power * ring_prefactor(in) * bracket;
}

double id_lower_bound(const BoundInputs& in) {
  in.validate();
  const auto& ch = in.chan;
  const double radicand = feasibility_radicand(in);
  if (!(radicand > 0.0))
    throw InfeasibleError("SINR infeasible at l_th: l_th^-alpha / SINR_th <= N_b / P_t");
  const double near = std::pow(in.l_th * (1.0 + in.epsilon0), -ch.alpha);
  const double amp = std::pow(in.l_th * (1.0 - in.epsilon0), -ch.alpha / 2.0);
  const double value = ch.tx_power * (near - amp * std::sqrt(radicand));
  if (!(value > 0.0)) throw InfeasibleError("energy lower bound is not positive");
  return value;
}

BoundReport epsilon_delta(const BoundInputs& in) {
  BoundReport r;
  r.i_d = id_lower_bound(in);
  r.complexity = complexity(in.nbhd);
  r.i3 = i3_bound(in);
  r.i_r = ir_bound(in);
  r.k_u = ring_count(in);
  const double rc = in.nbhd.contention_range;
  r.k_u_bound = rc + std::sqrt(in.n_nodes * in.l_th * rc);
  r.epsilon_delta = 2.0 * (r.i3 + r.i_r) / r.i_d;
  r.script_i = display_prefactor(in);
  r.display_epsilon = display_epsilon(in);
  r.display_discrepancy = std::abs(r.display_epsilon - r.epsilon_delta) / r.epsilon_delta;
  r.i3_printed_exponent = in.chan.tx_power * i3_per_power(in, 2.0);
  return r;
}

RcOrder corollary1_rc_order(const BoundInputs& in, double epsilon_target) {
  in.validate();
  if (!(epsilon_target > 0.0)) throw ValidationError("bounds.epsilon must be > 0");
  const double alpha = in.chan.alpha;
  RcOrder out;
  if (alpha < 4.0) {
    out.label = "O(N^{(4−α)/(4+α)})";
    out.regime = "2 ≤ α < 4";
    out.exponent = (4.0 - alpha) / (4.0 + alpha);
  } else if (is_four(alpha)) {
    out.label = "O(√ln N)";
    out.regime = "α = 4";
  } else {
    out.label = "O(1)";
    out.regime = "α > 4";
  }
  const double ratio = std::sqrt(complexity(in.nbhd));
  BoundInputs probe = in;
  for (double rc = in.l_th * (1.0 + in.epsilon0) * kRcGridFactor; rc <= kRcSearchLimit;
       rc *= kRcGridFactor) {
    probe.nbhd.contention_range = rc;
    probe.nbhd.interference_range = ratio * rc;
    const double eps = epsilon_delta(probe).epsilon_delta;
    if (eps <= epsilon_target) {
      out.r_c = rc;
      out.epsilon = eps;
      return out;
    }
  }
  throw InfeasibleError("no contention range up to the search limit reaches the target bound");
}

RcOrder corollary1_rc_order(double alpha, double n_nodes, double epsilon_target) {
  BoundInputs in;
  in.chan.alpha = alpha;
  in.n_nodes = n_nodes;
  return corollary1_rc_order(in, epsilon_target);
}

Corollary2Report corollary2_epsilon(const BoundInputs& in) {
  const double i_d = id_lower_bound(in);
  const double alpha = in.chan.alpha;
  const double rc = in.nbhd.contention_range;
  const double l = in.l_th;
  const double n = in.n_nodes;
  const double c = complexity(in.nbhd);
  const double k = 2.0 * in.chan.tx_power / i_d;
  const double g = ring_prefactor(in);
  const double lead = display_prefactor(in) / (rc * rc);
  const double x = (4.0 - alpha) / 4.0;

  Corollary2Report r;
  if (is_two(alpha)) {
    r.regime = "α = 2";
    const double t = 1.0 + 0.5 * std::log(c);
    r.value = k * (2.0 * t * t / (rc * rc) + g * std::sqrt(n * l * rc));
    const double tp = 2.0 + std::log(c);
    r.printed_value = lead * (tp * tp + 4.0 * kPi / l * std::sqrt(n * l * rc));
  } else if (alpha < 4.0) {
    r.regime = "2 < α < 4";
    r.a4 = k * g * 2.0 / (4.0 - alpha);
    r.a4_printed = lead;
    r.value = r.a4 * std::pow(n * l * rc, x);
    r.printed_value = r.a4_printed * std::pow(n * l * rc, x);
  } else if (is_four(alpha)) {
    r.regime = "α = 4";
    const double t = 2.0 - 1.0 / std::sqrt(c);
    const double tail = 1.0 / std::sqrt(c) + 0.5 * std::log(n * l / (c * rc));
    r.value = k * (2.0 * t * t / std::pow(rc, 4.0) + g * tail);
    const double tp = 2.0 - 1.0 / alpha;
    r.printed_value = lead * (2.0 * tp * tp / (rc * rc) + 4.0 * kPi / (l * l) * tail);
  } else {
    r.regime = "α > 4";
    const double gap2 = (alpha - 2.0) * (alpha - 2.0);
    const double rc_a = std::pow(rc, -alpha);
    const double rc_half = std::pow(rc, (4.0 - alpha) / 2.0);
    r.a1 = k * 2.0 * rc_a * alpha * alpha / gap2;
    r.a2 = k * (-8.0 * alpha * rc_a / gap2 + g * rc_half);
    r.a3 = k * g * (-2.0 / (4.0 - alpha)) * rc_half;
    const double a_sq = k * 8.0 * rc_a / gap2;
    const double a_n = k * g * 2.0 / (4.0 - alpha);
    r.a4 = a_n;
    r.value = r.a1 + r.a2 * std::pow(c, -(alpha - 2.0) / 4.0) +
              r.a3 * std::pow(c, -(alpha - 4.0) / 4.0) +
              a_sq * std::pow(c, -(alpha - 2.0) / 2.0) + a_n * std::pow(n * l * rc, x);
    const double script = display_prefactor(in);
    r.a1_printed = alpha * alpha * script / (std::pow(rc, alpha) * gap2);
    r.a2_printed = 4.0 * kPi * script / std::pow(l * rc, alpha / 2.0);
    r.a3_printed = -2.0 * script / ((4.0 - alpha) * std::pow(rc, alpha / 2.0));
    r.a4_printed = lead;
    r.printed_value = r.a1_printed + r.a2_printed * std::pow(c, -(alpha - 2.0) / 4.0) +
                      r.a3_printed * std::pow(c, -(alpha - 4.0) / 4.0);
  }
  return r;
}

std::vector<BoundRow> bound_sweep(const BoundInputs& base, const std::vector<double>& alphas,
                                  const std::vector<double>& interference_ranges) {
  std::vector<BoundRow> rows;
  for (double alpha : alphas) {
    for (double rf : interference_ranges) {
      BoundInputs in = base;
      in.chan.alpha = alpha;
      in.nbhd.interference_range = rf;
      BoundRow row;
      row.alpha = alpha;
      row.n_nodes = in.n_nodes;
      row.r_c = in.nbhd.contention_range;
      row.r_f = rf;
      try {
        row.report = epsilon_delta(in);
        row.feasible = true;
      } catch (const InfeasibleError&) {
        row.report.complexity = complexity(in.nbhd);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace selfconf
