#include "ocular/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ocular::sim {

std::vector<std::pair<double, double>> error_envelope(const Trace& trace) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : trace) {
    if (out.empty() || out.back().first != r.t)
      out.emplace_back(r.t, r.error_inf());
    else
      out.back().second = std::max(out.back().second, r.error_inf());
  }
  return out;
}

Metrics compute_metrics(const Trace& trace, double settle_band, double image_width) {
  if (trace.empty()) throw std::invalid_argument("metrics: empty trace");
  if (!(settle_band > 0 && image_width > 0)) throw std::invalid_argument("metrics: band and width must be positive");

  Metrics m;
  const auto envelope = error_envelope(trace);

  // Last tick outside the band; settled from the tick after it.
  std::size_t first_settled = 0;
  for (std::size_t k = 0; k < envelope.size(); ++k)
    if (!(envelope[k].second < settle_band)) first_settled = k + 1;
  if (first_settled < envelope.size()) m.settling_time = envelope[first_settled].first;

  const double t0 = trace.front().t;
  const double t_tail = t0 + 0.8 * (trace.back().t - t0);
  double tail_sum = 0.0;
  std::size_t tail_n = 0, valid_n = 0;
  for (const auto& r : trace) {
    if (!r.valid) continue;
    ++valid_n;
    m.peak_error = std::max(m.peak_error, r.error_inf());
    if (r.t >= t_tail) {
      tail_sum += r.error_inf();
      ++tail_n;
    }
  }
  m.steady_state_error = tail_n ? tail_sum / static_cast<double>(tail_n) : std::numeric_limits<double>::quiet_NaN();
  m.valid_fraction = static_cast<double>(valid_n) / static_cast<double>(trace.size());

  // Per eye, between consecutive ticks where the face is seen in both.
  double slip_sq = 0.0;
  std::size_t slip_n = 0;
  const double half = image_width / 2;
  for (Eye eye : kEyes) {
    const TraceRecord* prev = nullptr;
    for (const auto& r : trace) {
      if (r.eye != eye) continue;
      if (prev && prev->valid && r.valid && r.t > prev->t) {
        const double dt = r.t - prev->t;
        const double du = (r.u - prev->u) / dt / half;
        const double dv = (r.v - prev->v) / dt / half;
        slip_sq += du * du + dv * dv;
        ++slip_n;
      }
      prev = &r;
    }
  }
  m.rms_retinal_slip = slip_n ? std::sqrt(slip_sq / static_cast<double>(slip_n)) : 0.0;
  return m;
}

}  // namespace ocular::sim
