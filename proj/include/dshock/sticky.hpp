#pragma once

#include <iosfwd>
#include <vector>

#include "dshock/core.hpp"

namespace dshock::sticky {

struct Particle {
  double m = 0.0;
  double x = 0.0;
  double v = 0.0;
  double h = 0.0;  ///< internal energy carried by the particle

  double momentum() const noexcept { return m * v; }
  double kinetic() const noexcept { return 0.5 * m * v * v; }
};

/// Perfectly inelastic merge of two particles at the same point. Mass and
/// momentum add; the kinetic energy lost, m_a m_b (v_a - v_b)^2 / (2 (m_a + m_b)),
/// becomes internal energy. Position is the centre of mass.
Particle merge(const Particle& a, const Particle& b);

/// Piecewise-constant initial data (rho, U, H) on disjoint sorted intervals.
struct ProfileSegment {
  double a = 0.0;
  double b = 0.0;
  OuterState state;
};

struct PiecewiseProfile {
  std::vector<ProfileSegment> segments;

  static PiecewiseProfile from_riemann(const RiemannData& data);
  double total_mass() const;
};

/// Ordered 1D sticky-particle gas with an event queue of adjacent-pair
/// collisions. Particles stream freely between collisions; positions are
/// stored lazily against the time of each particle's last update so an event
/// costs O(log N).
class ParticleSystem {
 public:
  /// Particles must be sorted by position; coincident neighbours are merged
  /// on construction.
  explicit ParticleSystem(std::vector<Particle> particles, double time = 0.0);

  double time() const noexcept { return time_; }
  std::size_t size() const noexcept { return alive_; }
  std::size_t initial_count() const noexcept { return initial_count_; }
  double initial_mass() const noexcept { return initial_mass_; }
  long merge_count() const noexcept { return merges_; }
  /// Smallest internal-energy increment over all merges, divided by the
  /// kinetic energy of the pair (0 when no merge has happened).
  double min_relative_increment() const noexcept { return min_increment_; }

  /// Live particles at the current time, left to right.
  std::vector<Particle> particles() const;

  double total_mass() const;
  double total_momentum() const;
  double kinetic_energy() const;
  double internal_energy() const;
  double total_energy() const { return kinetic_energy() + internal_energy(); }

  /// Processes every collision with time <= t_end in time order (ties: the
  /// leftmost pair first), then streams to t_end.
  void advance(double t_end);

  /// Columns m,x,v,h.
  void write_csv(std::ostream& os) const;

 private:
  struct Node {
    Particle p;       // x is the position at t_ref
    double t_ref = 0.0;
    int prev = -1;
    int next = -1;
    bool alive = true;
    unsigned version = 0;
  };
  struct Event {
    double t;
    int left;
    int right;
    unsigned left_version;
    unsigned right_version;
    bool operator>(const Event& o) const {
      return t != o.t ? t > o.t : left > o.left;
    }
  };

  double position(const Node& n, double t) const { return n.p.x + n.p.v * (t - n.t_ref); }
  void schedule(int left, int right);
  void collide(int left, int right, double t);

  std::vector<Node> nodes_;
  std::vector<Event> heap_;
  int head_ = -1;
  std::size_t alive_ = 0;
  std::size_t initial_count_ = 0;
  double initial_mass_ = 0.0;
  double time_ = 0.0;
  long merges_ = 0;
  double min_increment_ = 0.0;
};

/// N equal-mass particles: particle i sits at the mass midpoint of the i-th
/// equal-mass cell, takes U at that point and the integral of H over its cell.
/// Throws EmptySupport when the profile has no mass.
ParticleSystem sample(const PiecewiseProfile& profile, int n);
ParticleSystem sample(const RiemannData& data, int n);

ParticleSystem run(ParticleSystem system, double t_end);

struct FrontEstimate {
  double x = 0.0;
  double u = 0.0;
  double e = 0.0;
  double h = 0.0;
};

/// The heaviest particle is the concentrated front. Particles within `window`
/// of it are pooled into the estimate. Throws NoCluster when nothing has
/// merged yet (max mass below 2 M(0) / N).
FrontEstimate empirical_front(const ParticleSystem& system, double window = 0.0);

}  // namespace dshock::sticky
