#pragma once

#include <Eigen/Core>
#include <utility>

#include "evonav/arena.hpp"
#include "evonav/camera.hpp"

namespace evonav {

struct NetworkSpec {
  int n_inputs = 16;  // camera pixel count
  int n_hidden = 8;
  int n_outputs = 2;  // left and right wheel commands
};

// Flat weight vector; the scan order is fixed by decode_genome/encode_params.
struct Genome {
  Eigen::VectorXd weights;
};

// Hidden activations; zero at the start of every trial.
using ControllerState = Eigen::VectorXd;

struct NetworkParams {
  Eigen::MatrixXd input_weights;      // n_hidden x n_inputs
  Eigen::MatrixXd recurrent_weights;  // n_hidden x n_hidden
  Eigen::VectorXd hidden_bias;        // n_hidden
  Eigen::MatrixXd output_weights;     // n_outputs x n_hidden
  Eigen::VectorXd output_bias;        // n_outputs
};

[[nodiscard]] int genome_length(const NetworkSpec& spec);

// Genome layout: input weight rows, recurrent weight rows, hidden bias,
// output weight rows, output bias.
[[nodiscard]] NetworkParams decode_genome(const Genome& genome, const NetworkSpec& spec);

[[nodiscard]] Genome encode_params(const NetworkParams& params);

// One synchronous update: h' = tanh(W_in x + W_rec h + b_h), y = logistic(W_out h' + b_out).
// Scratch buffers let the simulation loop run allocation-free.
void network_step_into(const NetworkParams& params, const Eigen::Ref<const Eigen::VectorXd>& state,
                       const Eigen::Ref<const Eigen::VectorXd>& image,
                       Eigen::Ref<Eigen::VectorXd> preactivation,
                       Eigen::Ref<Eigen::VectorXd> next_state, Eigen::Vector2d& outputs);

[[nodiscard]] std::pair<Eigen::Vector2d, ControllerState> network_step(
    const NetworkParams& params, const ControllerState& state, const CameraImage& image);

// Maps logistic outputs in [0, 1] to signed wheel speeds: 0.5 is stop, the
// extremes are full reverse/forward. Output 0 drives the left wheel.
[[nodiscard]] std::pair<double, double> outputs_to_wheel_speeds(const Eigen::Vector2d& outputs,
                                                                const RobotSpec& spec);

}  // namespace evonav
