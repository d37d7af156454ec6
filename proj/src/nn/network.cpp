// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hamlearn/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hamlearn/error.hpp"
#include "hamlearn/util/binary_io.hpp"

namespace hamlearn::nn {

namespace {

using Kind = LayerSpec::Kind;

std::string window_text(Window w) { return std::to_string(w.h) + "x" + std::to_string(w.w); }

std::vector<int> parse_dims(const std::string& text, std::size_t count) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("network descriptor: bad dimensions '" + text + "'");
    }
  }
  if (out.size() != count) throw ConfigError("network descriptor: bad dimensions '" + text + "'");
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string NetworkSpec::describe() const {
  std::string out = "input " + std::to_string(input.c) + "x" + std::to_string(input.h) + "x" +
                    std::to_string(input.w);
  for (const auto& l : layers) {
    out += "; ";
    switch (l.kind) {
      case Kind::kConv:
        out += "conv " + std::to_string(l.units) + " " + window_text(l.window);
        break;
      case Kind::kPool:
        out += "pool " + window_text(l.window);
        break;
      case Kind::kFlatten:
        out += "flatten";
        break;
      case Kind::kDense:
        out += "dense " + std::to_string(l.units);
        break;
      case Kind::kRelu:
        out += "relu";
        break;
      case Kind::kLinear:
        out += "linear";
        break;
      case Kind::kDropout: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", l.rate);
        out += "dropout ";
        out += buf;
        break;
      }
    }
  }
  return out;
}

NetworkSpec NetworkSpec::parse(std::string_view text) {
  NetworkSpec spec;
  bool have_input = false;
  std::stringstream all{std::string(text)};
  std::string item;
  while (std::getline(all, item, ';')) {
    std::stringstream words(trim(item));
    std::string name, a, b, extra;
    words >> name >> a >> b;
    if (words >> extra) throw ConfigError("network descriptor: trailing text in '" + item + "'");
    auto require = [&](bool ok) {
      if (!ok) throw ConfigError("network descriptor: malformed '" + trim(item) + "'");
    };
    if (name == "input") {
      require(!have_input && !a.empty() && b.empty());
      const auto d = parse_dims(a, 3);
      spec.input = Shape{1, d[0], d[1], d[2]};
      have_input = true;
      continue;
    }
    require(have_input);
    LayerSpec l;
    if (name == "conv") {
      require(!a.empty() && !b.empty());
      l.kind = Kind::kConv;
      l.units = parse_dims(a, 1)[0];
      const auto k = parse_dims(b, 2);
      l.window = {k[0], k[1]};
    } else if (name == "pool") {
      require(!a.empty() && b.empty());
      l.kind = Kind::kPool;
      const auto k = parse_dims(a, 2);
      l.window = {k[0], k[1]};
    } else if (name == "dense") {
      require(!a.empty() && b.empty());
      l.kind = Kind::kDense;
      l.units = parse_dims(a, 1)[0];
    } else if (name == "dropout") {
      require(!a.empty() && b.empty());
      l.kind = Kind::kDropout;
      try {
        l.rate = std::stod(a);
      } catch (const std::exception&) {
        require(false);
      }
    } else if (name == "flatten" || name == "relu" || name == "linear") {
      require(a.empty());
      l.kind = name == "flatten" ? Kind::kFlatten : name == "relu" ? Kind::kRelu : Kind::kLinear;
    } else {
      throw ConfigError("network descriptor: unknown layer '" + name + "'");
    }
    spec.layers.push_back(l);
  }
  if (!have_input) throw ConfigError("network descriptor: missing input shape");
  spec.shapes();
  return spec;
}

std::vector<Shape> NetworkSpec::shapes() const {
  if (input.c < 1 || input.h < 1 || input.w < 1) throw ShapeError("network input shape is empty");
  std::vector<Shape> out;
  Shape s{1, input.c, input.h, input.w};
  for (const auto& l : layers) {
    switch (l.kind) {
      case Kind::kConv:
        if (l.units < 1 || l.window.h % 2 == 0 || l.window.w % 2 == 0 || l.window.h < 1 ||
            l.window.w < 1) {
          throw ShapeError("conv layer needs positive channels and an odd kernel");
        }
        s.c = l.units;
        break;
      case Kind::kPool:
        if (l.window.h < 1 || l.window.w < 1 || s.h % l.window.h || s.w % l.window.w) {
          throw ShapeError("pooling window does not divide " + std::to_string(s.h) + "x" +
                           std::to_string(s.w));
        }
        s.h /= l.window.h;
        s.w /= l.window.w;
        break;
      case Kind::kFlatten:
        s = Shape{1, static_cast<int>(s.sample_size()), 1, 1};
        break;
      case Kind::kDense:
        if (l.units < 1) throw ShapeError("dense layer needs at least one unit");
        s = Shape{1, l.units, 1, 1};
        break;
      case Kind::kDropout:
        if (!(l.rate >= 0.0 && l.rate < 1.0)) throw ShapeError("dropout rate must be in [0, 1)");
        break;
      case Kind::kRelu:
      case Kind::kLinear:
        break;
    }
    out.push_back(s);
  }
  if (layers.empty() || layers.back().kind != Kind::kLinear || s.sample_size() != 1) {
    throw ShapeError("network must end in a single linear output unit");
  }
  return out;
}

std::string_view placement_name(DropoutPlacement placement) {
  return placement == DropoutPlacement::kAll ? "all" : "dense-only";
}

DropoutPlacement parse_placement(std::string_view name) {
  if (name == "dense-only") return DropoutPlacement::kDenseOnly;
  if (name == "all") return DropoutPlacement::kAll;
  throw ConfigError("unknown dropout placement: " + std::string(name));
}

bool is_known_preset(std::string_view preset) {
  return preset == "paper-2d" || preset == "small-2d" || preset == "paper-1d-flat";
}

bool preset_is_flat(std::string_view preset) { return preset == "paper-1d-flat"; }

NetworkSpec preset_spec(std::string_view preset, int extent, const PresetOptions& options) {
  if (!is_known_preset(preset)) throw ConfigError("unknown network preset: " + std::string(preset));
  if (extent < 4) throw ConfigError("network input extent must be >= 4");
  const bool flat = preset_is_flat(preset);
  const int c1 = preset == "small-2d" ? 16 : 32;
  const int c2 = 2 * c1;
  const Window kernel = flat ? Window{1, 3} : Window{3, 3};
  const Window pool = flat ? Window{1, 2} : Window{2, 2};
  NetworkSpec spec;
  spec.input = flat ? Shape{1, 1, 1, extent} : Shape{1, 1, extent, extent};
  auto add = [&](Kind kind, int units = 0, Window w = {}, double rate = 0.0) {
    spec.layers.push_back(LayerSpec{kind, units, w, rate});
  };
  auto conv_block = [&](int channels) {
    add(Kind::kConv, channels, kernel);
    add(Kind::kRelu);
    if (options.placement == DropoutPlacement::kAll) add(Kind::kDropout, 0, {}, options.dropout);
  };
  conv_block(c1);
  conv_block(c1);
  add(Kind::kPool, 0, pool);
  conv_block(c2);
  conv_block(c2);
  add(Kind::kPool, 0, pool);
  add(Kind::kFlatten);
  for (int units : {128, 32}) {
    add(Kind::kDense, units);
    add(Kind::kRelu);
    add(Kind::kDropout, 0, {}, options.dropout);
  }
  add(Kind::kDense, 1);
  add(Kind::kLinear);
  spec.shapes();
  return spec;
}

Network::Network(NetworkSpec spec, std::uint64_t init_seed) : spec_(std::move(spec)) {
  const auto shapes = spec_.shapes();
  std::mt19937_64 rng(init_seed);
  Shape in{1, spec_.input.c, spec_.input.h, spec_.input.w};
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    Layer layer;
    layer.spec = spec_.layers[i];
    if (layer.spec.kind == Kind::kConv) {
      const int fan_in = in.c * layer.spec.window.h * layer.spec.window.w;
      layer.weights = he_normal_init(fan_in, std::size_t(fan_in) * layer.spec.units, rng);
      layer.bias.assign(layer.spec.units, 0.0);
    } else if (layer.spec.kind == Kind::kDense) {
      const int fan_in = static_cast<int>(in.sample_size());
      layer.weights = he_normal_init(fan_in, std::size_t(fan_in) * layer.spec.units, rng);
      layer.bias.assign(layer.spec.units, 0.0);
    }
    layer.grad_weights.assign(layer.weights.size(), 0.0);
    layer.grad_bias.assign(layer.bias.size(), 0.0);
    layers_.push_back(std::move(layer));
    in = shapes[i];
  }
}

void Network::check_input(const Tensor4& batch) const {
  const Shape& s = batch.shape;
  if (s.n < 1 || s.c != spec_.input.c || s.h != spec_.input.h || s.w != spec_.input.w ||
      batch.data.size() != s.size()) {
    throw ShapeError("batch shape does not match the network input");
  }
}

Tensor4 Network::run(const Tensor4& batch, std::size_t last) const {
  check_input(batch);
  Tensor4 x = batch;
  for (std::size_t i = 0; i <= last && i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    switch (l.spec.kind) {
      case Kind::kConv:
        x = conv2d_forward(x, l.weights, l.bias, l.spec.window);
        break;
      case Kind::kPool:
        x = maxpool_forward(x, l.spec.window).output;
        break;
      case Kind::kFlatten:
        x.shape = Shape{x.shape.n, static_cast<int>(x.shape.sample_size()), 1, 1};
        break;
      case Kind::kDense:
        x = dense_forward(x, l.weights, l.bias);
        break;
      case Kind::kRelu:
        x = relu_forward(x);
        break;
      case Kind::kDropout:
      case Kind::kLinear:
        break;
    }
  }
  return x;
}

Tensor4 Network::predict(const Tensor4& batch) const { return run(batch, layers_.size()); }

Tensor4 Network::predict_until(const Tensor4& batch, std::size_t last) const {
  return run(batch, last);
}

Tensor4 Network::forward(const Tensor4& batch, Mode mode) {
  if (mode == Mode::kEval) return predict(batch);
  check_input(batch);
  Tensor4 x = batch;
  for (Layer& l : layers_) {
    switch (l.spec.kind) {
      case Kind::kConv:
        l.input = x;
        x = conv2d_forward(x, l.weights, l.bias, l.spec.window);
        break;
      case Kind::kPool: {
        l.input_shape = x.shape;
        PoolResult r = maxpool_forward(x, l.spec.window);
        l.argmax = std::move(r.argmax);
        x = std::move(r.output);
        break;
      }
      case Kind::kFlatten:
        l.input_shape = x.shape;
        x.shape = Shape{x.shape.n, static_cast<int>(x.shape.sample_size()), 1, 1};
        break;
      case Kind::kDense:
        l.input = x;
        x = dense_forward(x, l.weights, l.bias);
        break;
      case Kind::kRelu:
        l.input = x;
        x = relu_forward(x);
        break;
      case Kind::kDropout:
        if (frozen_masks_ && l.mask.size() == x.data.size()) {
          x = apply_mask(x, l.mask);
        } else {
          x = dropout_forward(x, l.spec.rate, dropout_rng_, Mode::kTrain, &l.mask);
        }
        break;
      case Kind::kLinear:
        break;
    }
  }
  last_output_ = x.data;
  return x;
}

double Network::backward(std::span<const double> targets) {
  if (last_output_.empty()) throw ConfigError("backward called without a training forward");
  const Loss loss = mse_loss(last_output_, targets);
  const int n = static_cast<int>(last_output_.size());
  Tensor4 g(Shape{n, 1, 1, 1});
  g.data = loss.grad;
  for (std::size_t idx = layers_.size(); idx-- > 0;) {
    Layer& l = layers_[idx];
    switch (l.spec.kind) {
      case Kind::kConv: {
        ConvGrads cg = conv2d_backward(l.input, l.weights, l.spec.window, g, idx > 0);
        std::copy(cg.weights.begin(), cg.weights.end(), l.grad_weights.begin());
        std::copy(cg.bias.begin(), cg.bias.end(), l.grad_bias.begin());
        g = std::move(cg.input);
        break;
      }
      case Kind::kPool:
        g = maxpool_backward(l.input_shape, l.argmax, g);
        break;
      case Kind::kFlatten:
        g.shape = l.input_shape;
        break;
      case Kind::kDense: {
        DenseGrads dg = dense_backward(l.input, l.weights, g);
        std::copy(dg.weights.begin(), dg.weights.end(), l.grad_weights.begin());
        std::copy(dg.bias.begin(), dg.bias.end(), l.grad_bias.begin());
        g = std::move(dg.input);
        break;
      }
      case Kind::kRelu:
        g = relu_backward(l.input, g);
        break;
      case Kind::kDropout:
        g = apply_mask(g, l.mask);
        break;
      case Kind::kLinear:
        break;
    }
  }
  return loss.value;
}

std::vector<ParamView> Network::parameters() {
  std::vector<ParamView> out;
  for (Layer& l : layers_) {
    if (l.weights.empty()) continue;
    out.push_back({l.weights, l.grad_weights});
    out.push_back({l.bias, l.grad_bias});
  }
  return out;
}

std::vector<std::vector<double>> Network::parameter_arrays() const {
  std::vector<std::vector<double>> out;
  for (const Layer& l : layers_) {
    if (l.weights.empty()) continue;
    out.push_back(l.weights);
    out.push_back(l.bias);
  }
  return out;
}

void Network::set_parameter_arrays(const std::vector<std::vector<double>>& arrays) {
  std::size_t k = 0;
  for (Layer& l : layers_) {
    if (l.weights.empty()) continue;
    if (k + 2 > arrays.size() || arrays[k].size() != l.weights.size() || arrays[k + 1].size() != l.bias.size()) {
      throw ShapeError("parameter arrays do not match the network");
    }
    std::copy(arrays[k].begin(), arrays[k].end(), l.weights.begin());
    std::copy(arrays[k + 1].begin(), arrays[k + 1].end(), l.bias.begin());
    k += 2;
  }
  if (k != arrays.size()) throw ShapeError("parameter arrays do not match the network");
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

void Network::clear_cache() {
  for (Layer& l : layers_) {
    l.input = Tensor4();
    l.argmax.clear();
    l.argmax.shrink_to_fit();
  }
  last_output_.clear();
}

Features extract_features(const Network& net, const Tensor4& image) {
  if (image.shape.n != 1) throw ShapeError("extract_features takes a single image");
  std::size_t pools = 0, last = 0;
  const auto& layers = net.spec().layers;
  for (std::size_t i = 0; i < layers.size() && pools < 2; ++i) {
    if (layers[i].kind == LayerSpec::Kind::kPool) {
      ++pools;
      last = i;
    }
  }
  if (pools < 2) throw ConfigError("feature extraction needs a network with two pooling layers");
  Features f;
  f.maps = net.predict_until(image, last);
  const std::size_t plane = std::size_t(f.maps.shape.h) * f.maps.shape.w;
  f.channel_mean_abs.resize(f.maps.shape.c);
  for (int c = 0; c < f.maps.shape.c; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < plane; ++i) s += std::abs(f.maps.data[c * plane + i]);
    f.channel_mean_abs[c] = s / static_cast<double>(plane);
  }
  return f;
}

std::vector<std::uint8_t> encode_checkpoint(const Network& net) {
  util::ByteWriter w;
  w.bytes("QNET");
  w.u16(kCheckpointVersion);
  const std::string desc = net.spec().describe();
  w.u32(static_cast<std::uint32_t>(desc.size()));
  w.bytes(desc);
  for (const auto& a : net.parameter_arrays()) {
    w.u64(a.size());
    w.f64s(a);
  }
  return std::move(w.data());
}

Network decode_checkpoint(std::span<const std::uint8_t> bytes) {
  util::ByteReader r(bytes, "checkpoint");
  r.expect_magic("QNET");
  const std::uint16_t version = r.u16();
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint: unsupported version " + std::to_string(version));
  }
  const std::uint32_t len = r.u32();
  NetworkSpec spec;
  try {
    spec = NetworkSpec::parse(r.str(len));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("checkpoint: bad descriptor: ") + e.what());
  }
  Network net(std::move(spec), 0);
  auto arrays = net.parameter_arrays();
  for (auto& a : arrays) {
    const std::uint64_t count = r.u64();
    if (count != a.size()) throw IoError("checkpoint: parameter array size mismatch");
    for (double& v : a) v = r.f64();
  }
  if (r.remaining() != 0) throw IoError("checkpoint: trailing bytes");
  net.set_parameter_arrays(arrays);
  return net;
}

void save_checkpoint(const Network& net, const std::filesystem::path& path) {
  util::write_file(path, encode_checkpoint(net));
}

Network load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(util::read_file(path));
}

}  // namespace hamlearn::nn
