// Copyright 2026 The qncs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Between attempts the error e = xhat - xbar obeys e' = Abar e, so it is
// propagated with the exact block exponential. The predictor xhat is
// integrated by the codec (RK4) and the plant is reconstructed as
// x = S^-1 E(t)^T (xhat - e).

#include "qncs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qncs/errors.hpp"
#include "qncs/rates.hpp"
#include "qncs/text.hpp"

namespace qncs {

namespace {

constexpr double kDivergenceFactor = 1e9;
constexpr double kConvergenceFactor = 1e-6;
constexpr double kRangeFloor = 1e-250;
constexpr double kFitMinR2 = 0.9;

std::string dump_vector(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += text::format_double(v[i]);
  }
  return s + "]";
}

// max_l |e_l| / j_l; a zero range with zero error counts as 0.
double error_ratio(const Vector& e, const Vector& J) {
  double worst = 0.0;
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    const double a = std::abs(e[l]);
    if (a == 0.0) continue;
    worst = std::max(worst, J[l] > 0.0 ? a / J[l] : kInfinity);
  }
  return worst;
}

void check_overflow(double t, const Vector& e, const Vector& J) {
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    if (std::abs(e[l]) > J[l] * (1.0 + kOverflowCheckSlack)) {
      throw InvariantBreach("overflow at t=" + text::format_double(t) + ": |e[" + std::to_string(l) +
                            "]| exceeds j; e=" + dump_vector(e) + " J=" + dump_vector(J));
    }
  }
}

class Protocol {
 public:
  Protocol(const SimConfig& cfg, const BlockStructure& structure) : kind_(cfg.protocol.kind), R_(cfg.protocol.R) {
    if (kind_ == ProtocolKind::TimeVarying) {
      TvrConfig tc = cfg.protocol.w.empty() ? TvrConfig::with_default_growth(R_, structure)
                                            : TvrConfig{R_, cfg.protocol.w};
      tc.validate(structure);
      encoder_.emplace(tc, structure.blocks);
      decoder_.emplace(tc, structure.blocks);
    }
  }

  [[nodiscard]] bool time_varying() const { return kind_ == ProtocolKind::TimeVarying; }

  [[nodiscard]] std::vector<int> budgets(double tk) const {
    if (!time_varying()) return R_;
    auto enc = encoder_->budgets(tk);
    if (enc != decoder_->budgets(tk)) throw InvariantBreach("bit budgets differ between encoder and decoder");
    return enc;
  }

  TvrScheduler::SuccessReport on_success(double zm, const std::vector<int>& bits) {
    auto rep = encoder_->on_success(zm, bits);
    decoder_->on_success(zm, bits);
    if (!(*encoder_ == *decoder_)) throw InvariantBreach("block clocks differ between encoder and decoder");
    return rep;
  }

  [[nodiscard]] std::vector<int> clock_g() const {
    std::vector<int> g;
    for (const auto& c : encoder_->clocks()) g.push_back(c.g);
    return g;
  }

 private:
  ProtocolKind kind_;
  std::vector<int> R_;
  std::optional<TvrScheduler> encoder_;
  std::optional<TvrScheduler> decoder_;
};

void warn_rates(const SimConfig& cfg, std::vector<std::string>& warnings) {
  if (!cfg.dos_params) return;
  const double level = cfg.dos_params->level(cfg.delta);
  if (!(level < 1.0)) {
    warnings.push_back("DoS level " + text::format_double(level) + " >= 1: no rate is certified");
    return;
  }
  for (std::size_t r = 0; r < cfg.structure.blocks.size(); ++r) {
    const double c = cfg.structure.blocks[r].c;
    if (!rate_satisfies(cfg.protocol.R[r], c, cfg.delta, level)) {
      warnings.push_back("rate " + std::to_string(cfg.protocol.R[r]) + " of block " + std::to_string(r) +
                         " does not exceed threshold " +
                         text::format_double(min_rate_threshold(c, cfg.delta, level)));
    }
  }
}

}  // namespace

const char* to_string(ProtocolKind kind) {
  return kind == ProtocolKind::TimeInvariant ? "time-invariant" : "time-varying";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "converged";
    case Verdict::Diverged:
      return "diverged";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

void SimConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be a positive finite number");
  if (!(horizon >= delta) || !std::isfinite(horizon)) throw ConfigError("horizon must be finite and >= delta");
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  if (!(j_margin > 0.0) || !std::isfinite(j_margin)) throw ConfigError("j_margin must be positive and finite");
  plant.validate();
  if (x0.size() != plant.nx()) throw ConfigError("x0 has " + std::to_string(x0.size()) + " entries, plant has " +
                                                 std::to_string(plant.nx()) + " states");
  if (!x0.allFinite()) throw ConfigError("x0 must be finite");
  if (protocol.R.size() != structure.blocks.size()) {
    throw ConfigError("protocol needs one rate per block (" + std::to_string(structure.blocks.size()) + ")");
  }
  for (int R : protocol.R) {
    if (R < 0 || R > kMaxBits) throw ConfigError("rates must lie in [0, " + std::to_string(kMaxBits) + "]");
  }
  if (protocol.kind == ProtocolKind::TimeInvariant && !protocol.w.empty()) {
    throw ConfigError("growth rates w apply to the time-varying protocol only");
  }
  if (trace.horizon() + kTimeEps < horizon && !trace.empty()) {
    throw ConfigError("DoS trace horizon " + text::format_double(trace.horizon()) + " is shorter than the run");
  }
}

int sim_attempt_count(double horizon, double delta) {
  if (!(delta > 0.0) || horizon < 0.0) throw std::invalid_argument("attempt count needs delta > 0, horizon >= 0");
  return static_cast<int>(std::ceil(horizon / delta - kTimeEps));
}

SimResult run(const SimConfig& cfg) {
  cfg.validate();
  const TransformedSystem sys = build_transformed_system(cfg.plant, cfg.structure);
  const double h = cfg.delta / cfg.substeps;
  const Codec codec(sys, h);
  const auto& blocks = cfg.structure.blocks;

  SimResult res;
  warn_rates(cfg, res.warnings);
  Protocol protocol(cfg, cfg.structure);

  const Vector xbar0 = sys.to_bar(0.0, cfg.x0);
  const Vector j0 = xbar0.cwiseAbs().array() + cfg.j_margin;
  CodecState enc = codec.init(protocol.budgets(0.0), xbar0, j0);
  CodecState dec = codec.init(protocol.budgets(0.0), xbar0, j0);
  Vector e = enc.xhat - xbar0;

  res.x0_norm = cfg.x0.norm();
  const double ref_norm = res.x0_norm > 0.0 ? res.x0_norm : j0.norm();
  bool diverged = false;

  auto sample = [&](double t, bool dos, bool attempt, bool success, int bits) {
    const Vector x = sys.from_bar(t, enc.xhat - e);
    const double nrm = x.norm();
    res.sample_t.push_back(t);
    res.sample_norm.push_back(nrm);
    res.sample_J_norm.push_back(enc.J.norm());
    res.max_error_ratio = std::max(res.max_error_ratio, error_ratio(e, enc.J));
    if (cfg.record_trajectory) res.trajectory.push_back({t, x, enc.xhat, e, enc.J, dos, attempt, success, bits});
    res.final_norm = nrm;
    res.end_time = t;
    if (nrm > kDivergenceFactor * ref_norm) diverged = true;
  };

  const int K = sim_attempt_count(cfg.horizon, cfg.delta);
  for (int k = 0; k < K; ++k) {
    const double tk = k * cfg.delta;
    const auto budget = protocol.budgets(tk);
    enc = codec.with_block_bits(std::move(enc), budget);
    dec = codec.with_block_bits(std::move(dec), budget);
    enc.t = tk;
    dec.t = tk;

    TxRecord tx;
    tx.t = tk;
    tx.block_bits = budget;
    for (std::size_t r = 0; r < blocks.size(); ++r) tx.total_bits += budget[r] * blocks[r].dim();
    const bool dos = cfg.trace.empty() ? false : cfg.trace.blocks(tk);
    tx.success = !dos;
    res.totals.attempts += 1;
    res.totals.bits_attempted += tx.total_bits;

    if (tx.success) {
      const Vector j_before = enc.J;
      EncodeResult er = codec.encode_error(enc, e);
      dec = codec.on_codewords(dec, er.codewords);
      if (!(dec == er.state)) throw InvariantBreach("encoder and decoder diverged at t=" + text::format_double(tk));
      enc = std::move(er.state);
      // Single rounding keeps e = -J (a fixed point of the jump) exact.
      for (Eigen::Index l = 0; l < e.size(); ++l) {
        e(l) = std::fma(-j_before(l), decode(er.codewords[static_cast<std::size_t>(l)]), e(l));
      }
      tx.codewords = std::move(er.codewords);
      res.totals.successes += 1;
      res.totals.bits_delivered += tx.total_bits;
      res.successes.push_back({tk, budget, enc.J});
      if (protocol.time_varying()) {
        auto rep = protocol.on_success(tk, budget);
        tx.rolled = rep.rolled;
        for (auto& p : rep.completed) res.clock_periods.push_back(std::move(p));
      }
    }
    if (protocol.time_varying()) {
      tx.clock_g = protocol.clock_g();
      if (tx.rolled.empty()) tx.rolled.assign(blocks.size(), false);
    }
    res.log.push_back(std::move(tx));
    check_overflow(tk, e, enc.J);
    sample(tk, dos, true, res.log.back().success, res.log.back().total_bits);

    if (diverged) {
      res.stop_reason = "state norm exceeded divergence cutoff";
      break;
    }
    if (enc.J.minCoeff() < kRangeFloor) {
      res.stop_reason = "quantisation range reached floating-point floor";
      break;
    }

    const double t_end = (k + 1 < K) ? (k + 1) * cfg.delta : cfg.horizon;
    const double span = t_end - tk;
    if (!(span > 0.0)) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(span / h - kTimeEps)));
    const double hs = span / n;
    const Matrix U = eval_expAbar(blocks, hs);
    for (int i = 1; i <= n; ++i) {
      enc = codec.propagate(enc, hs);
      dec = codec.propagate(dec, hs);
      e = U * e;
      const double t = i == n ? t_end : tk + i * hs;
      enc.t = t;
      dec.t = t;
      if (!(enc == dec)) throw InvariantBreach("encoder and decoder diverged at t=" + text::format_double(t));
      check_overflow(t, e, enc.J);
      // The interval end is sampled as the next attempt (after its jump).
      if (i < n || k + 1 == K) {
        const bool dos_now = !cfg.trace.empty() && cfg.trace.blocks(t);
        sample(t, dos_now, false, false, 0);
      } else {
        res.max_error_ratio = std::max(res.max_error_ratio, error_ratio(e, enc.J));
      }
      if (diverged) break;
    }
    if (diverged) {
      res.stop_reason = "state norm exceeded divergence cutoff";
      break;
    }
  }

  if (res.sample_t.size() >= 10) res.fit = decay_fit(res.sample_t, res.sample_norm);
  if (diverged) {
    res.verdict = Verdict::Diverged;
  } else if (res.final_norm < kConvergenceFactor * ref_norm || (res.fit.exponent < 0.0 && res.fit.r2 > kFitMinR2)) {
    res.verdict = Verdict::Converged;
  } else {
    res.verdict = Verdict::Inconclusive;
  }
  return res;
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> norms) {
  if (t.size() != norms.size()) throw std::invalid_argument("decay fit: times and norms differ in length");
  if (t.size() < 10) throw std::invalid_argument("decay fit needs at least 10 samples");
  const double t_mid = t.front() + 0.5 * (t.back() - t.front());
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_mid) continue;
    xs.push_back(t[i]);
    ys.push_back(std::log(std::max(norms[i], 1e-300)));
  }
  DecayFit fit;
  if (xs.size() < 2) return fit;
  // Flat samples carry no decay information; the centred sums below would
  // only see rounding noise.
  if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vx += (xs[i] - mx) * (xs[i] - mx);
    vy += (ys[i] - my) * (ys[i] - my);
    cxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(vx > 0.0) || !(vy > 0.0)) return fit;
  fit.exponent = cxy / vx;
  fit.r2 = std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0);
  return fit;
}

ProtocolComparison compare_protocols(const SimConfig& config) {
  SimConfig ti = config;
  ti.protocol.kind = ProtocolKind::TimeInvariant;
  ti.protocol.w.clear();
  SimConfig tv = config;
  tv.protocol.kind = ProtocolKind::TimeVarying;
  return {run(ti), run(tv)};
}

}  // namespace qncs
