// Copyright 2026 The wirecons Authors.
// SPDX-License-Identifier: Apache-2.0

#include "wirecons/presets.hpp"

namespace wirecons {

namespace {

ExperimentConfig preset_base(const PresetOptions& options)
{
    ExperimentConfig base;
    base.topology.r_cls = options.rcls_baseline;
    base.mechanism.r_v = 0.2;
    base.mechanism.n_w = 50;
    base.mechanism.r_sfl = 0.9;
    base.mechanism.delta_sfl = 0;
    base.n_tx = 10;
    base.seed = options.seed;
    if (options.repetitions) {
        base.repetitions = *options.repetitions;
    }
    if (options.k_rounds) {
        base.k_rounds = *options.k_rounds;
    }
    return base;
}

} // namespace

SweepSpec fig2_spec(const PresetOptions& options)
{
    SweepSpec spec;
    spec.base = preset_base(options);
    spec.base.fault.p_fail = 0.05;

    std::vector<FieldValue> lambdas;
    for (int l = 100; l <= 1000; l += 100) {
        lambdas.emplace_back(static_cast<double>(l));
    }
    spec.axes.push_back(SweepAxis::over("mechanism", {std::string("PoW"), std::string("PoS"), std::string("PoC")}));
    spec.axes.push_back(SweepAxis::over("lambda", lambdas));
    return spec;
}

SweepSpec fig3_spec(const PresetOptions& options)
{
    SweepSpec spec;
    spec.base = preset_base(options);
    spec.base.topology.lambda = 400.0;

    SweepAxis series;
    series.name = "series";
    for (double r_cls : {0.1, 0.3, 0.5}) {
        series.points.push_back({{"mechanism", std::string("PoW")}, {"r_cls", r_cls}});
    }
    series.points.push_back({{"mechanism", std::string("PoS")}, {"r_cls", options.rcls_baseline}});
    series.points.push_back({{"mechanism", std::string("PoC")}, {"r_cls", options.rcls_baseline}});
    spec.axes.push_back(std::move(series));

    std::vector<FieldValue> p_fails;
    for (int i = 0; i <= 9; ++i) {
        p_fails.emplace_back(i / 10.0);
    }
    spec.axes.push_back(SweepAxis::over("p_fail", p_fails));
    return spec;
}

} // namespace wirecons
