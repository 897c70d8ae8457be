#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace nlcsbp {

// psi(s) = -c0 s^alpha, tail nu(z, inf) = c0 z^-alpha / Gamma(1 - alpha).
struct StableSubordinator {
  double c0;
  double alpha;
};

// psi(s) = -delta s.
struct PureDriftSubordinator {
  double delta;
};

// Compound Poisson with rate 1 and tail (log(e + z))^-r; index 0.
struct LogTailSubordinator {
  double r;
};

// Tail min(gamma^gamma e^-gamma, (log(e + z))^gamma / (e + z)); index 1, -psi(s) ~ s (log 1/s)^(gamma+1) / (gamma+1).
// eps_cut: jumps below eps_cut times the current level are replaced by their mean in simulation.
struct LogCriticalSubordinator {
  double gamma;
  double eps_cut = 1e-3;
};

// psi(s) = c s - c0 s^alpha, largest zero p = (c0 / c)^(1 / (1 - alpha)).
struct StableMinusDrift {
  double c0;
  double alpha;
  double c;
};

using MechanismFamily = std::variant<StableSubordinator, PureDriftSubordinator, LogTailSubordinator,
                                     LogCriticalSubordinator, StableMinusDrift>;

class BranchingMechanism {
 public:
  BranchingMechanism(StableSubordinator f);
  BranchingMechanism(PureDriftSubordinator f);
  BranchingMechanism(LogTailSubordinator f);
  BranchingMechanism(LogCriticalSubordinator f);
  BranchingMechanism(StableMinusDrift f);

  const MechanismFamily& family() const { return family_; }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&family_); }

  std::string family_name() const;
  std::string describe() const;
  double index() const;
  bool is_subordinator() const;
  bool has_jumps() const;

  double psi(double s) const;
  // log(-psi(e^log_s)), valid while e^log_s < largest_zero().
  double log_neg_psi(double log_s) const;
  // nu((z, inf)) and its logarithm as a function of log z.
  double tail(double z) const;
  double log_tail(double log_z) const;
  // nu((0, inf)); infinite for the stable families.
  double total_jump_rate() const;
  double largest_zero() const;

 private:
  double jump_log_laplace(double log_s) const;
  MechanismFamily family_;
};

class RateFunction {
 public:
  RateFunction(double kappa, double beta);
  double operator()(double y) const;
  double derivative(double y) const;
  double log_value(double log_y) const;
  double kappa() const { return kappa_; }
  double beta() const { return beta_; }

 private:
  double kappa_;
  double beta_;
};

struct Model {
  Model(BranchingMechanism mech, RateFunction r, double x0);
  BranchingMechanism mechanism;
  RateFunction rate;
  double x0;
  double alpha() const { return mechanism.index(); }
  double beta() const { return rate.beta(); }
};

struct ConvergenceResult {
  bool converged = false;
  std::optional<double> value;
  // Upper limit reached, expressed in the log variable u = log y.
  double upper_limit_used = 0.0;
  double error_estimate = 0.0;
};

struct RegimeClass {
  enum class Kind { NonExplosive, Critical, Explosive };
  Kind kind;
  bool explosive;
  std::string describe() const;
  bool operator==(const RegimeClass&) const = default;
};

double psi_eval(const BranchingMechanism& mech, double s);
double psi_largest_zero(const BranchingMechanism& mech);

// Integrand of phi in the log variable: exp(-log R(e^u) - log(-psi(e^-u))).
double phi_log_integrand(const Model& model, double u);

// int_u0^inf g(u) du by doubling the range; reports divergence when increments stop shrinking.
ConvergenceResult doubling_tail_integral(const std::function<double(double)>& g, double u0);

ConvergenceResult explosion_energy(const Model& model);
ConvergenceResult explosion_test_stieltjes(const Model& model);
RegimeClass classify_regime(const Model& model);

// phi(x) = int_x^inf -dy / (y R(y) psi(1/y)), with its inverse.
class PhiFunction {
 public:
  explicit PhiFunction(const Model& model);
  double operator()(double x) const;
  double inverse(double t) const;
  // 1/p: phi is defined on (lower_bound(), inf).
  double lower_bound() const { return lower_; }
  const Model& model() const { return model_; }

 private:
  Model model_;
  double lower_;
};

double phi_integral(const Model& model, double x);
double phi_integral_inverse(const Model& model, double t);

}  // namespace nlcsbp
