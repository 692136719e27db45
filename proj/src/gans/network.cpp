#include "windml/gans/network.hpp"

#include "windml/error.hpp"

namespace windml::gans {

using nn::Shape;
using nn::Tensor;

namespace {

void stream_forward(const RefineStream& s, Tensor m0, StreamTrace& t) {
  t.maps[0] = std::move(m0);
  t.encoder_pre = s.encoder.forward(t.maps[0]);
  t.features[0] = nn::relu(t.encoder_pre);
  for (std::size_t i = 0; i < kResBlocks; ++i) {
    const auto& blk = s.blocks[i];
    t.block_pre[i] = blk.first.forward(t.features[i]);
    t.block_mid[i] = nn::relu(t.block_pre[i]);
    Tensor f = blk.second.forward(t.block_mid[i]);
    nn::add_inplace(f, t.features[i]);
    t.features[i + 1] = std::move(f);
    Tensor m = s.side[i].forward(t.features[i + 1]);
    nn::add_inplace(m, t.maps[i]);
    t.maps[i + 1] = std::move(m);
  }
}

// Returns the total gradient reaching M_0.
Tensor stream_backward(RefineStream& s, const StreamTrace& t, const MapStack& d_maps) {
  // dm: gradient on M_i through every later use; df: gradient on f^i.
  Tensor dm = d_maps[kResBlocks];
  Tensor df = s.side[kResBlocks - 1].backward(t.features[kResBlocks], dm);
  for (std::size_t i = kResBlocks; i-- > 0;) {
    // f^{i+1} = conv2(relu(conv1(f^i))) + f^i
    const auto& blk_in = t.features[i];
    auto& blk = s.blocks[i];
    Tensor d_mid = blk.second.backward(t.block_mid[i], df);
    Tensor d_in = blk.first.backward(blk_in, nn::relu_backward(t.block_pre[i], d_mid));
    nn::add_inplace(d_in, df);
    nn::add_inplace(dm, d_maps[i]);
    if (i > 0) nn::add_inplace(d_in, s.side[i - 1].backward(t.features[i], dm));
    df = std::move(d_in);
  }
  Tensor d_enc = s.encoder.backward(t.maps[0], nn::relu_backward(t.encoder_pre, df));
  nn::add_inplace(dm, d_enc);
  return dm;
}

}  // namespace

GeneratorTrace generator_forward_batch(const Generator& g, const Tensor& inputs) {
  if (inputs.rank() != 2 || inputs.dim(1) != g.trunk[0].weight.value.dim(0)) {
    fail(ErrorKind::Shape, "generator input shape " + nn::shape_string(inputs.shape()));
  }
  const std::size_t n = inputs.dim(0);
  GeneratorTrace t;
  t.input = inputs;
  const Tensor* x = &t.input;
  for (std::size_t i = 0; i < g.trunk.size(); ++i) {
    t.trunk_pre[i] = g.trunk[i].forward(*x);
    t.trunk_act[i] = nn::relu(t.trunk_pre[i]);
    x = &t.trunk_act[i];
  }
  const Shape map_shape{1, n, tapgrid::kRows, tapgrid::kCols};
  t.mean_pre = g.mean_hidden.forward(*x);
  t.mean_act = nn::relu(t.mean_pre);
  stream_forward(g.mean_stream, g.mean_out.forward(t.mean_act).reshaped(map_shape), t.mean);
  t.rms_pre = g.rms_hidden.forward(*x);
  t.rms_act = nn::relu(t.rms_pre);
  stream_forward(g.rms_stream, g.rms_out.forward(t.rms_act).reshaped(map_shape), t.rms);
  return t;
}

void generator_backward(Generator& g, const GeneratorTrace& t, const MapStack& d_mean, const MapStack& d_rms) {
  const std::size_t n = t.input.dim(0);
  const Shape flat{n, tapgrid::kTaps};
  const Tensor& trunk_out = t.trunk_act.back();

  Tensor dm0 = stream_backward(g.mean_stream, t.mean, d_mean).reshaped(flat);
  Tensor dh = g.mean_out.backward(t.mean_act, dm0);
  Tensor dtrunk = g.mean_hidden.backward(trunk_out, nn::relu_backward(t.mean_pre, dh));

  Tensor df0 = stream_backward(g.rms_stream, t.rms, d_rms).reshaped(flat);
  dh = g.rms_out.backward(t.rms_act, df0);
  nn::add_inplace(dtrunk, g.rms_hidden.backward(trunk_out, nn::relu_backward(t.rms_pre, dh)));

  for (std::size_t i = g.trunk.size(); i-- > 0;) {
    const Tensor& in = i == 0 ? t.input : t.trunk_act[i - 1];
    dtrunk = g.trunk[i].backward(in, nn::relu_backward(t.trunk_pre[i], dtrunk));
  }
}

DiscTrace discriminator_forward_batch(const Discriminator& d, const Tensor& maps) {
  if (maps.rank() != 4 || maps.dim(0) != 1 || maps.dim(2) != tapgrid::kRows || maps.dim(3) != tapgrid::kCols) {
    fail(ErrorKind::Shape, "discriminator expects (1, N, 9, 28) maps, got " + nn::shape_string(maps.shape()));
  }
  DiscTrace t;
  t.input = maps;
  t.pre1 = d.conv1.forward(t.input);
  t.act1 = nn::leaky_relu(t.pre1);
  t.pre2 = d.conv2.forward(t.act1);
  t.act2 = nn::leaky_relu(t.pre2);
  t.pool = nn::maxpool(t.act2, kPoolH, kPoolW);
  t.pre3 = d.conv3.forward(t.pool.output);
  t.act3 = nn::leaky_relu(t.pre3);
  t.logits = d.head.forward(t.act3);
  t.probs = nn::sigmoid(t.logits);
  return t;
}

Tensor discriminator_backward(Discriminator& d, const DiscTrace& t, const Tensor& d_logits, bool accumulate_params) {
  auto back = [&](nn::ConvLayer& layer, const Tensor& x, const Tensor& dy) {
    return accumulate_params ? layer.backward(x, dy) : layer.backward_input(x, dy);
  };
  Tensor g = back(d.head, t.act3, d_logits);
  g = back(d.conv3, t.pool.output, nn::leaky_relu_backward(t.pre3, g));
  g = nn::maxpool_backward(t.act2.shape(), t.pool.argmax, g);
  g = back(d.conv2, t.act1, nn::leaky_relu_backward(t.pre2, g));
  return back(d.conv1, t.input, nn::leaky_relu_backward(t.pre1, g));
}

}  // namespace windml::gans
