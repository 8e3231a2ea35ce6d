#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mw/cnn/checkpoint.hpp"
#include "mw/cnn/init.hpp"
#include "mw/cnn/layers.hpp"
#include "mw/cnn/loss.hpp"
#include "mw/cnn/metrics.hpp"
#include "mw/cnn/network.hpp"
#include "mw/cnn/sgd.hpp"
#include "mw/error.hpp"
#include "mw/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using mw::cnn::Tensor;

namespace {

Tensor<double> tensor3(int c, int h, int w, std::uint64_t seed) {
  Tensor<double> t(std::vector<int>{c, h, w});
  mw::Rng rng(seed);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = rng.next_normal();
  }
  return t;
}

mw::cnn::ModelConfig tiny_model() {
  mw::cnn::ModelConfig cfg;
  cfg.in_channels = 1;
  cfg.in_h = 6;
  cfg.in_w = 6;
  cfg.blocks = {{2, 3, 1, 1, 2, 2}};  // (1,6,6) -> (2,6,6) -> (2,3,3)
  cfg.dense_widths = {5};
  cfg.classes = 3;
  return cfg;
}

}  // namespace

TEST_CASE("convolution computes exact small cases") {
  SUBCASE("1x1 kernel with unit weight is the identity") {
    mw::cnn::Conv2d<double> conv(1, 1, 1, 1, 0);
    conv.weight[0] = 1.0;
    conv.bias[0] = 0.0;
    Tensor<double> in = tensor3(1, 4, 5, 1);
    Tensor<double> out = conv.forward(in);
    REQUIRE(out.shape == in.shape);
    for (std::size_t i = 0; i < in.size(); ++i) {
      CHECK(out[i] == doctest::Approx(in[i]));
    }
  }

  SUBCASE("all-ones 3x3 kernel over an all-ones 4x4 image sums to 9") {
    mw::cnn::Conv2d<double> conv(1, 1, 3, 1, 0);
    conv.weight.fill(1.0);
    conv.bias.fill(0.0);
    Tensor<double> in(std::vector<int>{1, 4, 4});
    in.fill(1.0);
    Tensor<double> out = conv.forward(in);
    REQUIRE(out.shape == std::vector<int>{1, 2, 2});
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] == doctest::Approx(9.0));
    }
  }

  SUBCASE("bias offsets every output") {
    mw::cnn::Conv2d<double> conv(1, 2, 1, 1, 0);
    conv.weight[0] = 0.0;
    conv.weight[1] = 0.0;
    conv.bias[0] = 3.5;
    conv.bias[1] = -1.25;
    Tensor<double> in = tensor3(1, 2, 2, 2);
    Tensor<double> out = conv.forward(in);
    CHECK(out[0] == doctest::Approx(3.5));
    CHECK(out[4] == doctest::Approx(-1.25));
  }

  SUBCASE("output extent follows floor((H + 2p - k)/s) + 1") {
    CHECK(mw::cnn::Conv2d<float>::out_extent(227, 11, 4, 0) == 55);
    CHECK(mw::cnn::Conv2d<float>::out_extent(27, 5, 1, 2) == 27);
    CHECK(mw::cnn::Conv2d<float>::out_extent(13, 3, 1, 1) == 13);
  }

  SUBCASE("channel mismatch is rejected") {
    mw::cnn::Conv2d<double> conv(2, 1, 3, 1, 0);
    Tensor<double> in = tensor3(1, 4, 4, 3);
    CHECK_THROWS_AS(conv.forward(in), mw::UsageError);
  }
}

TEST_CASE("convolution gradients match finite differences") {
  SUBCASE("stride 1 with padding") {
    mw::cnn::Conv2d<double> conv(2, 3, 3, 1, 1);
    mw::Rng rng(7);
    for (auto* p : conv.params()) {
      for (std::size_t i = 0; i < p->size(); ++i) {
        (*p)[i] = 0.5 * rng.next_normal();
      }
    }
    oracle::GradCheck gc = oracle::check_layer_gradients(conv, tensor3(2, 5, 6, 11), 21);
    CHECK(gc.comparisons > 0);
    CHECK(gc.max_rel_error < 1e-4);
  }

  SUBCASE("stride 2") {
    mw::cnn::Conv2d<double> conv(1, 2, 3, 2, 1);
    mw::Rng rng(8);
    for (auto* p : conv.params()) {
      for (std::size_t i = 0; i < p->size(); ++i) {
        (*p)[i] = 0.5 * rng.next_normal();
      }
    }
    oracle::GradCheck gc = oracle::check_layer_gradients(conv, tensor3(1, 7, 7, 12), 22);
    CHECK(gc.max_rel_error < 1e-4);
  }
}

TEST_CASE("max pooling") {
  SUBCASE("picks the window maximum") {
    mw::cnn::MaxPool<double> pool(2, 2);
    Tensor<double> in(std::vector<int>{1, 2, 2});
    in[0] = 1.0;
    in[1] = 2.0;
    in[2] = 3.0;
    in[3] = 4.0;
    Tensor<double> out = pool.forward(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == doctest::Approx(4.0));
  }

  SUBCASE("gradient routes to the first maximal element on ties") {
    mw::cnn::MaxPool<double> pool(2, 2);
    Tensor<double> in(std::vector<int>{1, 2, 2});
    in.fill(7.0);
    pool.forward(in);
    Tensor<double> gout(std::vector<int>{1, 1, 1});
    gout[0] = 1.0;
    Tensor<double> gin = pool.backward(gout);
    CHECK(gin[0] == doctest::Approx(1.0));
    CHECK(gin[1] == doctest::Approx(0.0));
    CHECK(gin[2] == doctest::Approx(0.0));
    CHECK(gin[3] == doctest::Approx(0.0));
  }

  SUBCASE("window larger than the input is rejected") {
    mw::cnn::MaxPool<double> pool(3, 2);
    Tensor<double> in(std::vector<int>{1, 2, 2});
    CHECK_THROWS_AS(pool.forward(in), mw::UsageError);
  }

  SUBCASE("overlapping windows pass finite differences") {
    mw::cnn::MaxPool<double> pool(3, 2);
    // Normal draws make ties (and near-ties inside the eps bracket)
    // vanishingly unlikely; the seed keeps the check reproducible.
    oracle::GradCheck gc = oracle::check_layer_gradients(pool, tensor3(2, 7, 7, 31), 32);
    CHECK(gc.max_rel_error < 1e-4);
  }
}

TEST_CASE("tanh layer") {
  mw::cnn::TanhLayer<double> layer;
  Tensor<double> in(std::vector<int>{3});
  in[0] = 0.0;
  in[1] = 100.0;
  in[2] = -0.5;
  Tensor<double> out = layer.forward(in);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(1.0));
  CHECK(out[2] == doctest::Approx(std::tanh(-0.5)));

  oracle::GradCheck gc = oracle::check_layer_gradients(layer, tensor3(1, 4, 4, 41), 42);
  CHECK(gc.max_rel_error < 1e-4);
}

TEST_CASE("dense layer") {
  SUBCASE("identity weights add only the bias") {
    mw::cnn::Dense<double> dense(3, 3);
    dense.weight.fill(0.0);
    for (int i = 0; i < 3; ++i) {
      dense.weight[static_cast<std::size_t>(i) * 3 + i] = 1.0;
      dense.bias[i] = 0.25 * i;
    }
    Tensor<double> in(std::vector<int>{3});
    in[0] = 5.0;
    in[1] = -2.0;
    in[2] = 0.5;
    Tensor<double> out = dense.forward(in);
    CHECK(out[0] == doctest::Approx(5.0));
    CHECK(out[1] == doctest::Approx(-1.75));
    CHECK(out[2] == doctest::Approx(1.0));
  }

  SUBCASE("wrong input length is rejected") {
    mw::cnn::Dense<double> dense(4, 2);
    Tensor<double> in(std::vector<int>{3});
    CHECK_THROWS_AS(dense.forward(in), mw::UsageError);
  }

  SUBCASE("gradients match finite differences") {
    mw::cnn::Dense<double> dense(6, 4);
    mw::Rng rng(9);
    for (auto* p : dense.params()) {
      for (std::size_t i = 0; i < p->size(); ++i) {
        (*p)[i] = 0.5 * rng.next_normal();
      }
    }
    Tensor<double> in(std::vector<int>{6});
    for (std::size_t i = 0; i < in.size(); ++i) {
      in[i] = rng.next_normal();
    }
    oracle::GradCheck gc = oracle::check_layer_gradients(dense, in, 52);
    CHECK(gc.max_rel_error < 1e-4);
  }
}

TEST_CASE("flatten preserves data and restores shape") {
  mw::cnn::Flatten<double> flatten;
  Tensor<double> in = tensor3(2, 3, 4, 61);
  Tensor<double> out = flatten.forward(in);
  CHECK(out.shape == std::vector<int>{24});
  CHECK(out.data == in.data);
  Tensor<double> back = flatten.backward(out);
  CHECK(back.shape == in.shape);
  CHECK(back.data == in.data);
}

TEST_CASE("softmax") {
  SUBCASE("equal logits in two classes give one half each") {
    Tensor<double> logits(std::vector<int>{2});
    logits.fill(3.0);
    Tensor<double> probs = mw::cnn::softmax(logits);
    CHECK(probs[0] == doctest::Approx(0.5));
    CHECK(probs[1] == doctest::Approx(0.5));
  }

  SUBCASE("outputs form a distribution") {
    mw::Rng rng(71);
    Tensor<double> logits(std::vector<int>{7});
    for (std::size_t i = 0; i < logits.size(); ++i) {
      logits[i] = 10.0 * rng.next_normal();
    }
    Tensor<double> probs = mw::cnn::softmax(logits);
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      CHECK(probs[i] >= 0.0);
      sum += probs[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("constant shifts do not change the result") {
    Tensor<double> a(std::vector<int>{4});
    a[0] = 0.3;
    a[1] = -1.2;
    a[2] = 2.0;
    a[3] = 0.0;
    Tensor<double> b = a;
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] += 123.0;
    }
    Tensor<double> pa = mw::cnn::softmax(a);
    Tensor<double> pb = mw::cnn::softmax(b);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-6));
    }
  }

  SUBCASE("softmax layer jacobian passes finite differences") {
    mw::cnn::Softmax<double> layer;
    Tensor<double> in(std::vector<int>{5});
    mw::Rng rng(81);
    for (std::size_t i = 0; i < in.size(); ++i) {
      in[i] = rng.next_normal();
    }
    oracle::GradCheck gc = oracle::check_layer_gradients(layer, in, 82);
    CHECK(gc.max_rel_error < 1e-4);
  }
}

TEST_CASE("cross-entropy loss") {
  Tensor<double> probs(std::vector<int>{2});

  SUBCASE("perfect prediction has zero loss") {
    probs[0] = 1.0;
    probs[1] = 0.0;
    CHECK(mw::cnn::scce_loss(probs, 0) == doctest::Approx(0.0));
  }

  SUBCASE("uniform prediction over two classes costs ln 2") {
    probs.fill(0.5);
    CHECK(mw::cnn::scce_loss(probs, 0) == doctest::Approx(0.6931472).epsilon(1e-6));
  }

  SUBCASE("a 10% probability on the true class costs ln 10") {
    probs[0] = 0.9;
    probs[1] = 0.1;
    CHECK(mw::cnn::scce_loss(probs, 1) == doctest::Approx(2.3025851).epsilon(1e-6));
  }

  SUBCASE("zero probability is floored, not infinite") {
    probs[0] = 1.0;
    probs[1] = 0.0;
    double loss = mw::cnn::scce_loss(probs, 1);
    CHECK(std::isfinite(loss));
    CHECK(loss == doctest::Approx(-std::log(1e-12)));
  }

  SUBCASE("invalid labels and non-distributions are rejected") {
    probs.fill(0.5);
    CHECK_THROWS_AS(mw::cnn::scce_loss(probs, 2), mw::UsageError);
    CHECK_THROWS_AS(mw::cnn::scce_loss(probs, -1), mw::UsageError);
    probs.fill(0.9);
    CHECK_THROWS_AS(mw::cnn::scce_loss(probs, 0), mw::UsageError);
  }
}

TEST_CASE("fused softmax cross-entropy gradient is probs minus one-hot") {
  const int classes = 5;
  const int label = 2;
  auto logit_loss = [&](const std::vector<double>& x) {
    Tensor<double> t(std::vector<int>{classes});
    for (int i = 0; i < classes; ++i) {
      t[i] = x[i];
    }
    return mw::cnn::scce_loss(mw::cnn::softmax(t), label);
  };

  mw::Rng rng(91);
  std::vector<double> x(classes);
  for (double& v : x) {
    v = 2.0 * rng.next_normal();
  }
  Tensor<double> t(std::vector<int>{classes});
  for (int i = 0; i < classes; ++i) {
    t[i] = x[i];
  }
  Tensor<double> probs = mw::cnn::softmax(t);
  std::vector<double> analytic(classes);
  for (int i = 0; i < classes; ++i) {
    analytic[i] = probs[i] - (i == label ? 1.0 : 0.0);
  }
  oracle::GradCheck gc = oracle::check_scalar_function(logit_loss, x, analytic);
  CHECK(gc.comparisons == classes);
  CHECK(gc.max_rel_error < 1e-6);
}

TEST_CASE("glorot-normal initialization") {
  SUBCASE("std is sqrt(2/(fan_in+fan_out))") {
    Tensor<double> t(std::vector<int>{100000});
    mw::Rng rng(101);
    mw::cnn::glorot_normal_fill(t, 100, 100, rng);  // expected std 0.1
    double mean = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      mean += t[i];
    }
    mean /= static_cast<double>(t.size());
    double var = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      var += (t[i] - mean) * (t[i] - mean);
    }
    double stddev = std::sqrt(var / static_cast<double>(t.size()));
    CHECK(std::abs(mean) < 0.01);
    CHECK(stddev == doctest::Approx(0.1).epsilon(0.05));

    mw::Rng rng2(102);
    mw::cnn::glorot_normal_fill(t, 1, 1, rng2);  // expected std 1.0
    double var1 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      var1 += t[i] * t[i];
    }
    CHECK(std::sqrt(var1 / static_cast<double>(t.size())) == doctest::Approx(1.0).epsilon(0.05));
  }

  SUBCASE("fixed seeds reproduce the draw exactly") {
    auto a = mw::cnn::glorot_normal_init<double>(30, 20, 7);
    auto b = mw::cnn::glorot_normal_init<double>(30, 20, 7);
    auto c = mw::cnn::glorot_normal_init<double>(30, 20, 8);
    CHECK(a.data == b.data);
    CHECK(a.data != c.data);
  }

  SUBCASE("bad fans are rejected") {
    Tensor<double> t(std::vector<int>{4});
    mw::Rng rng(1);
    CHECK_THROWS_AS(mw::cnn::glorot_normal_fill(t, 0, 5, rng), mw::UsageError);
  }
}

TEST_CASE("sgd with momentum") {
  SUBCASE("plain step without momentum") {
    Tensor<double> w(std::vector<int>{1}), g(std::vector<int>{1}), v(std::vector<int>{1});
    w[0] = 1.0;
    g[0] = 0.5;
    mw::cnn::sgd_step(w, g, v, 0.1, 0.0);
    CHECK(w[0] == doctest::Approx(0.95));
  }

  SUBCASE("momentum accumulates velocity across steps") {
    Tensor<double> w(std::vector<int>{1}), g(std::vector<int>{1}), v(std::vector<int>{1});
    w[0] = 0.0;
    g[0] = 1.0;
    mw::cnn::sgd_step(w, g, v, 0.1, 0.9);
    CHECK(v[0] == doctest::Approx(-0.1));
    CHECK(w[0] == doctest::Approx(-0.1));
    mw::cnn::sgd_step(w, g, v, 0.1, 0.9);
    CHECK(v[0] == doctest::Approx(-0.19));
    CHECK(w[0] == doctest::Approx(-0.29));
  }

  SUBCASE("velocity decays geometrically once gradients stop") {
    Tensor<double> w(std::vector<int>{1}), g(std::vector<int>{1}), v(std::vector<int>{1});
    g[0] = 1.0;
    mw::cnn::sgd_step(w, g, v, 0.1, 0.5);
    g[0] = 0.0;
    mw::cnn::sgd_step(w, g, v, 0.1, 0.5);
    CHECK(v[0] == doctest::Approx(-0.05));
    mw::cnn::sgd_step(w, g, v, 0.1, 0.5);
    CHECK(v[0] == doctest::Approx(-0.025));
  }

  SUBCASE("shape mismatches are rejected") {
    Tensor<double> w(std::vector<int>{2}), g(std::vector<int>{3}), v(std::vector<int>{2});
    CHECK_THROWS_AS(mw::cnn::sgd_step(w, g, v, 0.1, 0.0), mw::UsageError);
  }
}

TEST_CASE("classification metrics") {
  SUBCASE("hand-checked 2x2 confusion matrix") {
    mw::cnn::Metrics m = mw::cnn::metrics_from_confusion({{8, 2}, {1, 9}});
    CHECK(m.total == 20);
    CHECK(m.accuracy == doctest::Approx(0.85));
    CHECK(m.precision[1] == doctest::Approx(9.0 / 11.0));
    CHECK(m.recall[1] == doctest::Approx(0.9));
    CHECK(m.f1[1] == doctest::Approx(2.0 * (9.0 / 11.0) * 0.9 / (9.0 / 11.0 + 0.9)));
    CHECK(m.precision[0] == doctest::Approx(8.0 / 9.0));
    CHECK(m.recall[0] == doctest::Approx(0.8));
    CHECK(m.precision_macro == doctest::Approx(0.5 * (8.0 / 9.0 + 9.0 / 11.0)));
    CHECK(m.recall_macro == doctest::Approx(0.85));
  }

  SUBCASE("vector and confusion paths agree") {
    std::vector<int> truth{0, 0, 1, 1, 2, 2, 2};
    std::vector<int> predicted{0, 1, 1, 1, 2, 0, 2};
    mw::cnn::Metrics a = mw::cnn::compute_metrics(truth, predicted, 3);
    mw::cnn::Metrics b = mw::cnn::metrics_from_confusion(a.confusion);
    CHECK(a.accuracy == doctest::Approx(b.accuracy));
    CHECK(a.f1_macro == doctest::Approx(b.f1_macro));
    CHECK(a.confusion[0][1] == 1);
    CHECK(a.confusion[2][0] == 1);
  }

  SUBCASE("perfect predictions score 1 everywhere") {
    std::vector<int> truth{0, 1, 0, 1, 1};
    mw::cnn::Metrics m = mw::cnn::compute_metrics(truth, truth, 2);
    CHECK(m.accuracy == doctest::Approx(1.0));
    CHECK(m.precision_macro == doctest::Approx(1.0));
    CHECK(m.recall_macro == doctest::Approx(1.0));
    CHECK(m.f1_macro == doctest::Approx(1.0));
  }

  SUBCASE("classes that never occur or are never predicted score zero, not NaN") {
    mw::cnn::Metrics m = mw::cnn::metrics_from_confusion({{5, 0}, {3, 0}});
    CHECK(m.precision[1] == 0.0);
    CHECK(m.recall[1] == 0.0);
    CHECK(m.f1[1] == 0.0);
    CHECK(std::isfinite(m.f1_macro));
  }

  SUBCASE("mismatched vectors and bad labels are rejected") {
    CHECK_THROWS_AS(mw::cnn::compute_metrics({0, 1}, {0}, 2), mw::UsageError);
    CHECK_THROWS_AS(mw::cnn::compute_metrics({0, 2}, {0, 1}, 2), mw::UsageError);
  }
}

TEST_CASE("classifier model geometry") {
  SUBCASE("the 227x227 chain collapses to a 256-vector") {
    mw::cnn::ModelConfig cfg = mw::cnn::alexnet_config(6);
    std::vector<mw::cnn::LayerShape> chain = cfg.shape_chain();

    auto shape_of = [&](const std::string& layer) -> std::vector<int> {
      for (const auto& s : chain) {
        if (s.layer == layer) {
          return s.shape;
        }
      }
      FAIL("missing layer " << layer);
      return {};
    };
    CHECK(shape_of("input") == std::vector<int>{1, 227, 227});
    CHECK(shape_of("conv1") == std::vector<int>{96, 55, 55});
    CHECK(shape_of("pool1") == std::vector<int>{96, 27, 27});
    CHECK(shape_of("conv2") == std::vector<int>{256, 27, 27});
    CHECK(shape_of("pool2") == std::vector<int>{256, 13, 13});
    CHECK(shape_of("conv3") == std::vector<int>{384, 13, 13});
    CHECK(shape_of("pool3") == std::vector<int>{384, 6, 6});
    CHECK(shape_of("conv4") == std::vector<int>{384, 6, 6});
    CHECK(shape_of("pool4") == std::vector<int>{384, 2, 2});
    CHECK(shape_of("conv5") == std::vector<int>{256, 2, 2});
    CHECK(shape_of("pool5") == std::vector<int>{256, 1, 1});
    CHECK(shape_of("flatten") == std::vector<int>{256});
    CHECK(shape_of("dense1") == std::vector<int>{4096});
    CHECK(shape_of("dense2") == std::vector<int>{4096});
    CHECK(shape_of("logits") == std::vector<int>{6});
  }

  SUBCASE("degenerate configurations are rejected") {
    CHECK_THROWS_AS(mw::cnn::alexnet_config(1).validate(), mw::UsageError);
    mw::cnn::ModelConfig cfg = tiny_model();
    cfg.blocks[0].kernel = 9;  // exceeds the padded 6+2 input extent
    CHECK_THROWS_AS(cfg.validate(), mw::UsageError);
    cfg = tiny_model();
    cfg.dense_widths = {0};
    CHECK_THROWS_AS(cfg.validate(), mw::UsageError);
  }
}

TEST_CASE("network end-to-end behavior") {
  SUBCASE("forward produces one logit per class, deterministically") {
    mw::cnn::Network<float> net(tiny_model(), 5);
    Tensor<float> in(std::vector<int>{1, 6, 6});
    mw::Rng rng(3);
    for (std::size_t i = 0; i < in.size(); ++i) {
      in[i] = static_cast<float>(rng.next_normal());
    }
    Tensor<float> logits = net.forward(in);
    CHECK(logits.shape == std::vector<int>{3});

    mw::cnn::Network<float> net2(tiny_model(), 5);
    Tensor<float> logits2 = net2.forward(in);
    CHECK(logits.data == logits2.data);

    mw::cnn::Network<float> net3(tiny_model(), 6);
    Tensor<float> logits3 = net3.forward(in);
    CHECK(logits.data != logits3.data);

    int pred = net.predict(in);
    Tensor<float> probs = net.probabilities(in);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      CHECK(probs[pred] >= probs[i]);
    }
  }

  SUBCASE("whole-network parameter gradients pass finite differences") {
    mw::cnn::Network<double> net(tiny_model(), 17);
    Tensor<double> in = tensor3(1, 6, 6, 18);
    const int label = 1;

    net.zero_grads();
    Tensor<double> probs = mw::cnn::softmax(net.forward(in));
    Tensor<double> grad = probs;
    grad[label] -= 1.0;
    net.backward(grad);

    oracle::GradCheck gc;
    for (Tensor<double>* p : net.params()) {
      Tensor<double>* g = nullptr;
      // params() and grads() are aligned index-by-index.
      auto ps = net.params();
      auto gs = net.grads();
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i] == p) {
          g = gs[i];
        }
      }
      REQUIRE(g != nullptr);
      for (std::size_t i = 0; i < p->size(); i += 7) {  // sample every 7th weight
        double saved = (*p)[i];
        double eps = 1e-5;
        (*p)[i] = saved + eps;
        double up = mw::cnn::scce_loss(mw::cnn::softmax(net.forward(in)), label);
        (*p)[i] = saved - eps;
        double down = mw::cnn::scce_loss(mw::cnn::softmax(net.forward(in)), label);
        (*p)[i] = saved;
        oracle::fold_rel_error(gc, (*g)[i], (up - down) / (2 * eps), 1e-6);
      }
    }
    CHECK(gc.comparisons > 20);
    CHECK(gc.max_rel_error < 1e-3);
  }

  SUBCASE("fewer than two classes is rejected") {
    mw::cnn::ModelConfig cfg = tiny_model();
    cfg.classes = 1;
    CHECK_THROWS_AS(mw::cnn::Network<float>(cfg, 0), mw::UsageError);
  }
}

TEST_CASE("checkpoints round-trip the network") {
  fixture::TempDir dir;

  mw::cnn::ModelConfig cfg = tiny_model();
  mw::cnn::Network<float> net(cfg, 99);
  std::filesystem::path path = dir / "model.ckpt";
  mw::cnn::save_checkpoint(path, net);

  SUBCASE("parameters and config survive exactly") {
    mw::cnn::Network<float> loaded = mw::cnn::load_checkpoint(path);
    CHECK(loaded.config().classes == cfg.classes);
    CHECK(loaded.config().in_h == cfg.in_h);
    REQUIRE(loaded.config().blocks.size() == cfg.blocks.size());
    CHECK(loaded.config().blocks[0].filters == cfg.blocks[0].filters);

    auto a = net.params();
    auto b = loaded.params();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i]->shape == b[i]->shape);
      CHECK(a[i]->data == b[i]->data);
    }
  }

  SUBCASE("a clobbered magic number is rejected") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(mw::cnn::load_checkpoint(path), mw::DataError);
  }

  SUBCASE("a truncated file is rejected") {
    auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size / 2);
    CHECK_THROWS_AS(mw::cnn::load_checkpoint(path), mw::DataError);
  }

  SUBCASE("a missing file is rejected") {
    CHECK_THROWS_AS(mw::cnn::load_checkpoint(dir / "nope.ckpt"), mw::DataError);
  }
}
