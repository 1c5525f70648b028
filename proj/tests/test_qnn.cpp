// Copyright 2026 The cvqpinn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "cvqpinn/qnn.hpp"

using namespace cvqpinn;

TEST(NetworkConfig, ParameterCounts) {
    NetworkConfig c;
    EXPECT_EQ(c.param_count(), 44u);
    c.multi_layers = 4;
    c.single_layers = 0;
    EXPECT_EQ(c.param_count(), 48u);
    c = NetworkConfig{};
    c.num_modes = 1;
    c.multi_layers = 0;
    c.output_modes = {0};
    EXPECT_EQ(c.param_count(), 10u);
}

TEST(NetworkConfig, Validation) {
    NetworkConfig c;
    c.num_modes = 3;
    EXPECT_THROW(c.validate(), ConfigError);
    c = NetworkConfig{};
    c.num_modes = 1;
    c.output_modes = {0};
    EXPECT_THROW(c.validate(), ConfigError); // two-mode layers on one mode
    c = NetworkConfig{};
    c.output_modes = {2};
    EXPECT_THROW(c.validate(), ConfigError);
    c = NetworkConfig{};
    c.cutoff = 1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Forward, IdentityNetworkReadsDisplacement) {
    const NetworkConfig c;
    const NetworkParams zeros(c.param_count(), 0.0);
    const auto r = forward(c, zeros, {0.3, 0.0});
    ASSERT_EQ(r.outputs.size(), 2u);
    EXPECT_NEAR(r.outputs[0], 0.6, 1e-12);
    EXPECT_NEAR(r.outputs[1], 0.0, 1e-12);
    EXPECT_NEAR(r.norm_sq, 1.0, 1e-12);
}

TEST(Forward, RequiresOneInputPerMode) {
    const NetworkConfig c;
    const NetworkParams zeros(c.param_count(), 0.0);
    EXPECT_THROW(forward(c, zeros, {0.3}), UsageError);
}

TEST(Forward, CircuitMatchesLayerByLayerApplication) {
    NetworkConfig c;
    c.cutoff = 8;
    const NetworkParams p = init_params(c, 7, 10.0);
    const std::vector<double> x{0.4, -0.2};
    const auto r = forward(c, p, x);

    FockState<Complex> s = encode_inputs(x, c);
    std::size_t off = 0;
    for (int l = 0; l < c.multi_layers; ++l, off += 12) {
        s = apply_two_mode_layer(TwoModeLayerParams::from_flat(std::span(p).subspan(off, 12)), s);
    }
    for (int l = 0; l < c.single_layers; ++l) {
        for (int m = 0; m < c.num_modes; ++m, off += 5) {
            s = apply_single_mode_layer(SingleModeLayerParams::from_flat(std::span(p).subspan(off, 5)), s, m);
        }
    }
    EXPECT_NEAR(expectation_x(s, 0), r.outputs[0], 1e-12);
    EXPECT_NEAR(expectation_x(s, 1), r.outputs[1], 1e-12);
}

TEST(Forward, LayerParamsRoundTrip) {
    std::vector<double> flat(12);
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 0.1 * static_cast<double>(i);
    const auto two = TwoModeLayerParams::from_flat(flat).flat();
    for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(two[i], flat[i]);
    EXPECT_THROW(TwoModeLayerParams::from_flat(std::span(flat).subspan(0, 5)), UsageError);
    const auto one = SingleModeLayerParams::from_flat(std::span(flat).subspan(0, 5)).flat();
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(one[i], flat[i]);
}

TEST(Init, DeterministicPerSeed) {
    const NetworkConfig c;
    EXPECT_EQ(init_params(c, 3), init_params(c, 3));
    EXPECT_NE(init_params(c, 3), init_params(c, 4));
    for (double v : init_params(c, 3)) EXPECT_LT(std::abs(v), 0.1);
}

TEST(Checkpoint, RoundTripIsExact) {
    NetworkConfig c;
    c.multi_layers = 4;
    c.single_layers = 0;
    const NetworkParams p = init_params(c, 11, 37.0);
    const Checkpoint ck = parse_checkpoint(serialize_checkpoint(c, p));
    EXPECT_EQ(ck.config, c);
    ASSERT_EQ(ck.params.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(ck.params[i], p[i]);
}

TEST(Checkpoint, RejectsBadInput) {
    const NetworkConfig c;
    EXPECT_THROW(parse_checkpoint("{not json"), ConfigError);
    EXPECT_THROW(parse_checkpoint(serialize_checkpoint(c, NetworkParams(3, 0.0))), ConfigError);
    std::string text = serialize_checkpoint(c, NetworkParams(c.param_count(), 0.0));
    text.replace(text.find("\"version\": 1"), 12, "\"version\": 9");
    EXPECT_THROW(parse_checkpoint(text), ConfigError);
}

TEST(Forward, SmallParameterLayersKeepNorm) {
    std::vector<double> two(12), one(5);
    for (std::size_t i = 0; i < two.size(); ++i) two[i] = 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    for (std::size_t i = 0; i < one.size(); ++i) one[i] = 0.5 * std::cos(2.3 * static_cast<double>(i));
    const auto vac = make_vacuum(2, 20);
    EXPECT_GE(norm_squared(apply_two_mode_layer(TwoModeLayerParams::from_flat(two), vac)), 1.0 - 1e-6);
    EXPECT_GE(norm_squared(apply_single_mode_layer(SingleModeLayerParams::from_flat(one), vac, 0)), 1.0 - 1e-6);
}

TEST(Forward, DefaultInitKeepsNormOnPoissonDomain) {
    const NetworkConfig c;
    const Circuit circ(c, init_params(c, 0));
    for (double x : {0.0, 0.4, 0.8, 1.2, 1.5707963267948966}) {
        const auto r = forward(circ, {x, 0.0});
        EXPECT_GE(r.norm_sq, 0.99);
        for (double u : r.outputs) EXPECT_TRUE(std::isfinite(u));
    }
}
