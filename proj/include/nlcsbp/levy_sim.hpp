#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlcsbp/mechanisms.hpp"
#include "nlcsbp/rng.hpp"

namespace nlcsbp {

struct SimOptions {
  // Stable families: jumps below relative_jump_cut * max(|level|, jump_cut_floor) are replaced by their mean.
  double relative_jump_cut = 1e-4;
  double jump_cut_floor = 1.0;
  std::uint64_t max_events = 200'000'000;
  // A path above a + escape_multiplier / p counts as escaped.
  double escape_multiplier = 40.0;
};

enum class EventKind : std::uint8_t { Jump = 0, GridStep = 1, DriftCross = 2 };

struct PathState {
  double time = 0.0;
  double value = 0.0;
  // slope of the segment that ended at this state
  double segment_slope = 0.0;
};

struct PathEvent {
  EventKind kind;
  double t_event;
  double pre_value;
  double post_value;
  bool operator==(const PathEvent&) const = default;
};

// A linear stretch until the next jump.
struct Segment {
  double slope;
  double wait;
  double cutoff;
};

// The parent Levy process as simulated: exact jumps above a level-dependent cutoff plus
// the mean of the smaller jumps as drift.
class ParentProcess {
 public:
  explicit ParentProcess(const BranchingMechanism& mech, const SimOptions& opts = {});

  double cutoff(double level) const;
  double jump_rate(double cutoff) const;
  double small_jump_drift(double cutoff) const;
  Segment draw_segment(double level, RngStream& rng) const;
  double draw_jump(double cutoff, RngStream& rng) const;

  const BranchingMechanism& mechanism() const { return mech_; }
  const SimOptions& options() const { return opts_; }

 private:
  BranchingMechanism mech_;
  SimOptions opts_;
  double linear_drift_ = 0.0;
  double stable_scale_ = 0.0;  // c0 / Gamma(1 - alpha)
  double alpha_ = 0.0;
  double lc_corner_ = 1.0;      // log(e + z*) for the log critical family
  double lc_log_plateau_ = 0.0;
  double lc_corner_z_ = 0.0;
};

struct UndecidedError : std::runtime_error {
  UndecidedError(const std::string& what, PathState s) : std::runtime_error(what), state(s) {}
  PathState state;
};

std::pair<PathState, PathEvent> next_event(const BranchingMechanism& mech, const PathState& state, double grid_dt,
                                           RngStream& rng, const SimOptions& opts = {});

// Positive stable variable with Laplace transform exp(-c0 dt s^alpha).
double stable_positive_sample(double alpha, double c0, double dt, RngStream& rng);

// z with tail(z) / tail(0+) = u for the finite-activity families, u in (0, 1].
double tail_inverse_jump_sample(const BranchingMechanism& mech, double u);

struct PassageSample {
  double tau_plus;
  double pre_value;
  double post_value;
  std::uint64_t events;
};

PassageSample simulate_until_level(const BranchingMechanism& mech, double x0, double b, RngStream& rng,
                                   const SimOptions& opts = {});
std::optional<double> first_passage_down(const BranchingMechanism& mech, double x0, double a, double horizon,
                                         RngStream& rng, const SimOptions& opts = {});

std::vector<PathEvent> simulate_path(const BranchingMechanism& mech, double x0, double horizon, double grid_dt,
                                     RngStream& rng, const SimOptions& opts = {});

// Little-endian: u64 count, then per event u8 kind, f64 t, f64 pre, f64 post.
void write_path_dump(std::ostream& os, const std::vector<PathEvent>& events);
std::vector<PathEvent> read_path_dump(std::istream& is);

}  // namespace nlcsbp
