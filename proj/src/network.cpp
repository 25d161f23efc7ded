#include "evonav/network.hpp"

#include <cmath>
#include <string>

#include "evonav/errors.hpp"

namespace evonav {

namespace {

using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                   Eigen::RowMajor>>;
using RowMajorMutableMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void check_spec(const NetworkSpec& spec) {
  if (spec.n_inputs < 1) throw ConfigError("network spec: n_inputs must be >= 1");
  if (spec.n_hidden < 1) throw ConfigError("network spec: n_hidden must be >= 1");
  if (spec.n_outputs != 2) throw ConfigError("network spec: n_outputs must be 2");
}

}  // namespace

int genome_length(const NetworkSpec& spec) {
  check_spec(spec);
  return spec.n_hidden * (spec.n_inputs + spec.n_hidden + 1) +
         spec.n_outputs * (spec.n_hidden + 1);
}

NetworkParams decode_genome(const Genome& genome, const NetworkSpec& spec) {
  const int expected = genome_length(spec);
  if (genome.weights.size() != expected) {
    throw CodecError("decode_genome: genome has " + std::to_string(genome.weights.size()) +
                     " genes, spec requires " + std::to_string(expected));
  }
  const int in = spec.n_inputs;
  const int hid = spec.n_hidden;
  const int out = spec.n_outputs;
  const double* cursor = genome.weights.data();
  NetworkParams params;
  params.input_weights = RowMajorMap(cursor, hid, in);
  cursor += hid * in;
  params.recurrent_weights = RowMajorMap(cursor, hid, hid);
  cursor += hid * hid;
  params.hidden_bias = Eigen::Map<const Eigen::VectorXd>(cursor, hid);
  cursor += hid;
  params.output_weights = RowMajorMap(cursor, out, hid);
  cursor += out * hid;
  params.output_bias = Eigen::Map<const Eigen::VectorXd>(cursor, out);
  return params;
}

Genome encode_params(const NetworkParams& params) {
  const int hid = static_cast<int>(params.input_weights.rows());
  const int in = static_cast<int>(params.input_weights.cols());
  const int out = static_cast<int>(params.output_weights.rows());
  const NetworkSpec spec{in, hid, out};
  if (params.recurrent_weights.rows() != hid || params.recurrent_weights.cols() != hid ||
      params.hidden_bias.size() != hid || params.output_weights.cols() != hid ||
      params.output_bias.size() != out) {
    throw CodecError("encode_params: inconsistent parameter shapes");
  }
  Genome genome;
  genome.weights.resize(genome_length(spec));
  double* cursor = genome.weights.data();
  RowMajorMutableMap(cursor, hid, in) = params.input_weights;
  cursor += hid * in;
  RowMajorMutableMap(cursor, hid, hid) = params.recurrent_weights;
  cursor += hid * hid;
  Eigen::Map<Eigen::VectorXd>(cursor, hid) = params.hidden_bias;
  cursor += hid;
  RowMajorMutableMap(cursor, out, hid) = params.output_weights;
  cursor += out * hid;
  Eigen::Map<Eigen::VectorXd>(cursor, out) = params.output_bias;
  return genome;
}

void network_step_into(const NetworkParams& params, const Eigen::Ref<const Eigen::VectorXd>& state,
                       const Eigen::Ref<const Eigen::VectorXd>& image,
                       Eigen::Ref<Eigen::VectorXd> preactivation,
                       Eigen::Ref<Eigen::VectorXd> next_state, Eigen::Vector2d& outputs) {
  const Eigen::Index hid = params.input_weights.rows();
  if (image.size() != params.input_weights.cols()) {
    throw CodecError("network_step: image size does not match n_inputs");
  }
  if (state.size() != hid || preactivation.size() != hid || next_state.size() != hid) {
    throw CodecError("network_step: state size does not match n_hidden");
  }
  if (params.output_weights.rows() != 2) {
    throw CodecError("network_step: expected exactly 2 outputs");
  }
  // Accumulation order is pinned (input weights ascending, then recurrent,
  // then bias; scalar std::tanh/std::exp): evaluation must reproduce
  // bit-for-bit regardless of SIMD width or BLAS-style kernel choices, and
  // the matrices are far too small for blocked products to pay off anyway.
  const Eigen::Index n_in = params.input_weights.cols();
  for (Eigen::Index h = 0; h < hid; ++h) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n_in; ++j) acc += params.input_weights(h, j) * image(j);
    for (Eigen::Index j = 0; j < hid; ++j) acc += params.recurrent_weights(h, j) * state(j);
    acc += params.hidden_bias(h);
    preactivation(h) = acc;
    next_state(h) = std::tanh(acc);
  }
  for (int o = 0; o < 2; ++o) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < hid; ++j) acc += params.output_weights(o, j) * next_state(j);
    acc += params.output_bias(o);
    outputs(o) = 1.0 / (1.0 + std::exp(-acc));
  }
}

std::pair<Eigen::Vector2d, ControllerState> network_step(const NetworkParams& params,
                                                         const ControllerState& state,
                                                         const CameraImage& image) {
  ControllerState next_state(state.size());
  Eigen::VectorXd preactivation(state.size());
  Eigen::Vector2d outputs;
  network_step_into(params, state, image, preactivation, next_state, outputs);
  return {outputs, std::move(next_state)};
}

std::pair<double, double> outputs_to_wheel_speeds(const Eigen::Vector2d& outputs,
                                                  const RobotSpec& spec) {
  return {(2.0 * outputs(0) - 1.0) * spec.max_wheel_speed,
          (2.0 * outputs(1) - 1.0) * spec.max_wheel_speed};
}

}  // namespace evonav
