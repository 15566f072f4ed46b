#pragma once

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "dicke/bath.hpp"
#include "dicke/gkba.hpp"
#include "dicke/params.hpp"
#include "dicke/rk4.hpp"

namespace dicke::bath {

// The GKBA state and the rotating-frame bath amplitudes integrated as one
// vector, so the leakage force is evaluated at every RK4 stage.
struct CoupledState {
  gkba::BlockedState quantum;
  Eigen::VectorXcd amplitudes;
};

void assign_sum(CoupledState& out, const CoupledState& y, double a, const CoupledState& k);
void add_scaled(CoupledState& y, double a, const CoupledState& k);

class CoupledStepper {
 public:
  CoupledStepper(const SystemParams& p, const BathConfig& config);

  CoupledState initial_state() const;
  double step(CoupledState& s, double dt);  // returns the re-symmetrisation residue
  const RotatingFrame& frame() const { return frame_; }
  const Model& model() const { return model_; }

 private:
  Model model_;
  BathConfig config_;
  RotatingFrame frame_;
  std::optional<Rk4<CoupledState>> rk4_;
};

// One synchronised RK4 step of (GKBA + bath); both inputs at the same t.
std::pair<gkba::GkbaState, BathState> coupled_step(const gkba::GkbaState& quantum, const BathState& bath,
                                                   const SystemParams& p, const BathConfig& config, double dt);

}  // namespace dicke::bath
