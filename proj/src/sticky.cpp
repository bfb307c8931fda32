#include "dshock/sticky.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "dshock/format.hpp"

namespace dshock::sticky {

Particle merge(const Particle& a, const Particle& b) {
  Particle out;
  out.m = a.m + b.m;
  out.v = (a.m * a.v + b.m * b.v) / out.m;
  out.x = (a.m * a.x + b.m * b.x) / out.m;
  const double dv = a.v - b.v;
  // Same as m_a v_a^2/2 + m_b v_b^2/2 - m v^2/2, without the cancellation.
  out.h = a.h + b.h + 0.5 * (a.m * b.m / out.m) * dv * dv;
  return out;
}

PiecewiseProfile PiecewiseProfile::from_riemann(const RiemannData& data) {
  const double L = data.half_length();
  return PiecewiseProfile{{{-L, 0.0, data.left()}, {0.0, L, data.right()}}};
}

double PiecewiseProfile::total_mass() const {
  double m = 0.0;
  for (const auto& s : segments) m += s.state.rho() * (s.b - s.a);
  return m;
}

ParticleSystem::ParticleSystem(std::vector<Particle> particles, double time) : time_(time) {
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto& p = particles[i];
    if (!(p.m > 0.0)) throw Error(ErrorKind::Validation, "particle mass must be positive");
    if (p.h < 0.0) throw Error(ErrorKind::Validation, "particle internal energy must be >= 0");
    if (i > 0 && p.x < particles[i - 1].x) {
      throw Error(ErrorKind::Validation, "particles must be sorted by position");
    }
  }
  nodes_.reserve(particles.size());
  for (const auto& p : particles) {
    if (!nodes_.empty() && nodes_.back().p.x == p.x) {
      const Particle merged = merge(nodes_.back().p, p);
      const double kin = nodes_.back().p.kinetic() + p.kinetic();
      if (kin > 0.0) {
        min_increment_ =
            merges_ == 0 ? (merged.h - nodes_.back().p.h - p.h) / kin
                         : std::min(min_increment_, (merged.h - nodes_.back().p.h - p.h) / kin);
      }
      nodes_.back().p = merged;
      ++merges_;
      continue;
    }
    Node n;
    n.p = p;
    n.t_ref = time;
    nodes_.push_back(n);
  }
  const int count = static_cast<int>(nodes_.size());
  for (int i = 0; i < count; ++i) {
    nodes_[i].prev = i - 1;
    nodes_[i].next = i + 1 < count ? i + 1 : -1;
    initial_mass_ += nodes_[i].p.m;
  }
  head_ = count > 0 ? 0 : -1;
  alive_ = nodes_.size();
  initial_count_ = particles.size();
  for (int i = 0; i + 1 < count; ++i) schedule(i, i + 1);
}

void ParticleSystem::schedule(int left, int right) {
  if (left < 0 || right < 0) return;
  const Node& a = nodes_[left];
  const Node& b = nodes_[right];
  const double closing = a.p.v - b.p.v;
  if (!(closing > 0.0)) return;
  const double gap = std::max(0.0, position(b, time_) - position(a, time_));
  heap_.push_back(Event{time_ + gap / closing, left, right, a.version, b.version});
  std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
}

void ParticleSystem::collide(int left, int right, double t) {
  Node& a = nodes_[left];
  Node& b = nodes_[right];
  Particle pa = a.p;
  Particle pb = b.p;
  pa.x = position(a, t);
  pb.x = position(b, t);
  const Particle merged = merge(pa, pb);
  const double kin = pa.kinetic() + pb.kinetic();
  if (kin > 0.0) {
    const double rel = (merged.h - pa.h - pb.h) / kin;
    min_increment_ = merges_ == 0 ? rel : std::min(min_increment_, rel);
  }
  ++merges_;

  a.p = merged;
  a.t_ref = t;
  ++a.version;
  b.alive = false;
  ++b.version;
  a.next = b.next;
  if (b.next >= 0) nodes_[b.next].prev = left;
  --alive_;

  schedule(a.prev, left);
  schedule(left, a.next);
}

void ParticleSystem::advance(double t_end) {
  if (t_end < time_) throw Error(ErrorKind::Validation, "cannot advance backwards in time");
  while (!heap_.empty() && heap_.front().t <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    const Event ev = heap_.back();
    heap_.pop_back();
    const Node& a = nodes_[ev.left];
    const Node& b = nodes_[ev.right];
    if (!a.alive || !b.alive || a.next != ev.right || a.version != ev.left_version ||
        b.version != ev.right_version) {
      continue;
    }
    time_ = std::max(time_, ev.t);
    collide(ev.left, ev.right, time_);
  }
  time_ = t_end;
}

std::vector<Particle> ParticleSystem::particles() const {
  std::vector<Particle> out;
  out.reserve(alive_);
  for (int i = head_; i >= 0; i = nodes_[i].next) {
    Particle p = nodes_[i].p;
    p.x = position(nodes_[i], time_);
    out.push_back(p);
  }
  return out;
}

namespace {

// Neumaier-compensated sum; the conservation checks compare totals at 1e-12.
template <class F>
double sum_over(const std::vector<Particle>& ps, F f) {
  double s = 0.0;
  double c = 0.0;
  for (const auto& p : ps) {
    const double v = f(p);
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace

double ParticleSystem::total_mass() const {
  return sum_over(particles(), [](const Particle& p) { return p.m; });
}
double ParticleSystem::total_momentum() const {
  return sum_over(particles(), [](const Particle& p) { return p.momentum(); });
}
double ParticleSystem::kinetic_energy() const {
  return sum_over(particles(), [](const Particle& p) { return p.kinetic(); });
}
double ParticleSystem::internal_energy() const {
  return sum_over(particles(), [](const Particle& p) { return p.h; });
}

void ParticleSystem::write_csv(std::ostream& os) const {
  os << "m,x,v,h\n";
  for (const auto& p : particles()) write_csv_row(os, {p.m, p.x, p.v, p.h});
}

ParticleSystem sample(const PiecewiseProfile& profile, int n) {
  if (n < 2) throw Error(ErrorKind::Validation, "need at least two particles");
  const double total = profile.total_mass();
  if (!(total > 0.0)) throw Error(ErrorKind::EmptySupport, "initial profile carries no mass");
  for (std::size_t k = 0; k < profile.segments.size(); ++k) {
    const auto& s = profile.segments[k];
    if (!(s.b > s.a) || (k > 0 && s.a < profile.segments[k - 1].b)) {
      throw Error(ErrorKind::Validation, "profile segments must be sorted and disjoint");
    }
  }

  // Cumulative mass at segment starts.
  std::vector<double> cum{0.0};
  for (const auto& s : profile.segments) cum.push_back(cum.back() + s.state.rho() * (s.b - s.a));

  // Position at cumulative mass q; inside a massless segment the first point wins.
  auto locate = [&](double q) -> std::pair<std::size_t, double> {
    for (std::size_t k = 0; k < profile.segments.size(); ++k) {
      const auto& s = profile.segments[k];
      if (s.state.rho() > 0.0 && q <= cum[k + 1]) {
        return {k, s.a + (q - cum[k]) / s.state.rho()};
      }
    }
    const std::size_t last = profile.segments.size() - 1;
    return {last, profile.segments[last].b};
  };
  auto internal_between = [&](double x0, double x1) {
    double h = 0.0;
    for (const auto& s : profile.segments) {
      const double lo = std::max(x0, s.a);
      const double hi = std::min(x1, s.b);
      if (hi > lo) h += s.state.h_density() * (hi - lo);
    }
    return h;
  };

  const double m = total / n;
  std::vector<Particle> ps;
  ps.reserve(n);
  double cell_lo = locate(0.0).second;
  for (int i = 0; i < n; ++i) {
    const auto [seg, x] = locate((i + 0.5) * m);
    const double cell_hi = i + 1 == n ? profile.segments.back().b : locate((i + 1) * m).second;
    Particle p;
    p.m = m;
    p.x = x;
    p.v = profile.segments[seg].state.u();
    p.h = internal_between(cell_lo, cell_hi);
    ps.push_back(p);
    cell_lo = cell_hi;
  }
  return ParticleSystem(std::move(ps));
}

ParticleSystem sample(const RiemannData& data, int n) {
  return sample(PiecewiseProfile::from_riemann(data), n);
}

ParticleSystem run(ParticleSystem system, double t_end) {
  system.advance(t_end);
  return system;
}

FrontEstimate empirical_front(const ParticleSystem& system, double window) {
  const auto ps = system.particles();
  if (ps.empty()) throw Error(ErrorKind::NoCluster, "empty particle system");
  const auto heaviest = std::max_element(
      ps.begin(), ps.end(), [](const Particle& a, const Particle& b) { return a.m < b.m; });
  const double threshold = 2.0 * system.initial_mass() / static_cast<double>(system.initial_count());
  if (heaviest->m < threshold * (1.0 - 1e-12)) {
    throw Error(ErrorKind::NoCluster, "no particle has merged yet");
  }
  FrontEstimate est;
  double mom = 0.0;
  double moment = 0.0;
  for (const auto& p : ps) {
    if (std::abs(p.x - heaviest->x) > window && &p != &*heaviest) continue;
    est.e += p.m;
    mom += p.momentum();
    moment += p.m * p.x;
    est.h += p.h;
  }
  est.u = mom / est.e;
  est.x = moment / est.e;
  if (window == 0.0) {
    est.x = heaviest->x;
    est.u = heaviest->v;
  }
  return est;
}

}  // namespace dshock::sticky
