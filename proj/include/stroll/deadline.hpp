#pragma once

#include <map>
#include <optional>
#include <vector>

#include "stroll/metric.hpp"
#include "stroll/walk.hpp"

namespace stroll {

/// One candidate skeleton for the deadline solver: a chain of groups with
/// cumulative length budgets. A vertex earns credit when it is first visited
/// in group i with arrival <= cumulative[i] and deadline >= cumulative[i].
struct DeadlineGuess {
  std::vector<int> breakpoints;            // group-end vertices when known
  std::vector<Rational> budgets;           // per-group budget B_i
  std::vector<Rational> cumulative;        // prefix sums of budgets
  std::vector<Rational> excess;            // per-group path excess (reporting)
  std::vector<std::vector<int>> eligible;  // N_i = {v : D(v) >= cumulative[i]}
};

struct DeadlineConfig {
  double time_limit_seconds = 60.0;
  std::size_t max_guesses = 100000;  // enumeration cap; binding => not certified
};

/// Candidate skeletons in nondecreasing group count. Cumulative budgets range
/// over increasing tuples of distinct deadline values, which is exhaustive:
/// eligibility only changes at those values and every walk is re-verified.
/// With known_path the single skeleton induced by that walk is emitted.
std::vector<DeadlineGuess> enumerate_guesses(
    const MetricInstance& m, int s, const std::map<int, Rational>& deadlines,
    double epsilon, int m_max,
    const std::optional<std::vector<int>>& known_path = std::nullopt);

/// Recomputes eligible sets from the cumulative budgets; sets are nested.
void eligible_sets(const MetricInstance& m, const std::map<int, Rational>& deadlines,
                   DeadlineGuess& guess);

struct MglResult {
  bool feasible = false;
  std::vector<std::vector<int>> legs;  // one walk per group, chained
  int prize = 0;
  Rational total_length;
  std::vector<int> credited;  // vertices claimed on time
};

/// Exact multi-groups-legs orienteering for one skeleton: maximize credited
/// vertices subject to the cumulative budget of every group.
MglResult solve_mgl_orienteering(const MetricInstance& m, int s,
                                 const std::map<int, Rational>& deadlines,
                                 const DeadlineGuess& guess);

struct DeadlineVerification {
  std::vector<int> walk;
  std::vector<Rational> arrivals;  // per walk position
  int on_time = 0;                 // independent recount from scratch
};

DeadlineVerification concatenate_and_verify(const MetricInstance& m, int s,
                                            const std::map<int, Rational>& deadlines,
                                            const std::vector<std::vector<int>>& legs);

struct DblDeadlineResult {
  bool feasible = false;
  std::vector<int> walk;
  int on_time = 0;                 // verified with true distances
  bool certified = false;          // guess stream completed without caps
  std::vector<Rational> arrivals;  // true arrivals per walk position
  std::vector<int> credited;       // vertices the solver claims on time
};

/// Exact-deadlines mode; requires integer distances and deadlines (in the
/// instance's normalized units), otherwise directs to the bicriteria mode.
DblDeadlineResult solve_deadline_dbl(const MetricInstance& m, int s,
                                     const std::map<int, Rational>& deadlines,
                                     double epsilon, int m_max = 3,
                                     const DeadlineConfig& cfg = {});

struct BicriteriaRounding {
  std::vector<std::vector<Rational>> dist;  // distances rounded down
  std::map<int, Rational> deadlines;        // deadlines rounded up
  Rational lambda;                          // rounding base
};

/// Rounds distances down and deadlines up to powers of lambda = 1 + eps^2/(2 delta),
/// delta = max(1, log2 aspect). Solving the rounded instance violates true
/// deadlines by at most lambda^2 <= 1 + eps.
BicriteriaRounding bicriteria_round(const MetricInstance& m,
                                    const std::map<int, Rational>& deadlines,
                                    double epsilon);

/// Rational-input mode: solves the rounded instance; `credited` holds the
/// vertices on time under rounded arithmetic while `arrivals` are true.
DblDeadlineResult solve_deadline_bicriteria(const MetricInstance& m, int s,
                                            const std::map<int, Rational>& deadlines,
                                            double epsilon, int m_max = 3,
                                            const DeadlineConfig& cfg = {});

}  // namespace stroll
