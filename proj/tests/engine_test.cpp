#include "carbosim/engine.hpp"

#include <random>

#include <gtest/gtest.h>

#include "carbosim/error.hpp"
#include "test_support.hpp"

using namespace carbosim;
using namespace carbosim::testing;

namespace {

SimulationOptions carbon_on(double end_time = 0.0) {
    SimulationOptions options;
    options.carbon_enabled = true;
    options.end_time = end_time;
    return options;
}

Workload jobs(std::vector<Job> list) {
    Workload wl;
    wl.jobs = std::move(list);
    std::sort(wl.jobs.begin(), wl.jobs.end(), [](const Job& a, const Job& b) {
        if (a.submit_time != b.submit_time)
            return a.submit_time < b.submit_time;
        return a.id < b.id;
    });
    return wl;
}

std::vector<const TraceRecord*> records_of_type(const SimulationResult& result, char type) {
    std::vector<const TraceRecord*> out;
    for (const TraceRecord& rec : result.trace)
        if (rec.event_type == type)
            out.push_back(&rec);
    return out;
}

} // namespace

TEST(RunSimulation, EmptyWorkloadNoEvents) {
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    SimulationResult result = run_simulation(platform, {}, {}, carbon_on());
    EXPECT_DOUBLE_EQ(result.makespan, 0.0);
    EXPECT_TRUE(result.trace.empty());
    ASSERT_EQ(result.per_host_summary.size(), 1u);
    EXPECT_DOUBLE_EQ(result.per_host_summary[0].energy_j, 0.0);
    EXPECT_DOUBLE_EQ(result.per_host_summary[0].carbon_g, 0.0);
}

TEST(RunSimulation, IdleHourHandOracle) {
    // 10 W idle for 3600 s at 100 g/kWh: 36 000 J = 0.01 kWh -> 1 g.
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    SimulationResult result = run_simulation(platform, {}, {}, carbon_on(3600.0));
    ASSERT_EQ(result.per_host_summary.size(), 1u);
    EXPECT_NEAR(result.per_host_summary[0].energy_j, 36000.0, 1e-9 * 36000.0);
    EXPECT_NEAR(result.per_host_summary[0].carbon_g, 1.0, 1e-9);
}

TEST(RunSimulation, OffHourHandOracle) {
    // power_off at 0, end at 3600: 1 W off wattage -> 3600 J, 0.1 g at 100.
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    auto events = parse_events("0,Intel_i5_11400H,power_off\n");
    SimulationResult result = run_simulation(platform, {}, events, carbon_on(3600.0));
    EXPECT_NEAR(result.per_host_summary[0].energy_j, 3600.0, 1e-9 * 3600.0);
    EXPECT_NEAR(result.per_host_summary[0].carbon_g, 0.1, 1e-10);
    ASSERT_EQ(result.trace.size(), 1u);
    EXPECT_EQ(result.trace[0].event_type, 'p');
}

TEST(RunSimulation, SingleJobTraceAndAccounts) {
    auto platform = single_host_platform(i5_host());
    auto wl = jobs({job("resnet18", 0, 6, 182e9)});
    SimulationResult result = run_simulation(platform, wl, {}, carbon_on());

    EXPECT_NEAR(result.makespan, 182.0 / 72.0, 1e-12);
    ASSERT_EQ(result.trace.size(), 2u);
    EXPECT_EQ(result.trace[0].event_type, 's');
    EXPECT_EQ(result.trace[1].event_type, 'e');

    double duration = 182.0 / 72.0;
    EXPECT_NEAR(result.per_host_summary[0].energy_j, 40.0 * duration, 1e-9 * 40.0 * duration);
}

TEST(Scheduling, ExclusiveAllocationSerializes) {
    auto platform = single_host_platform(i5_host());
    auto wl = jobs({job("a", 0, 6, 182e9), job("b", 0, 6, 182e9)});
    SimulationResult result = run_simulation(platform, wl, {}, carbon_on());

    double duration = 182.0 / 72.0;
    auto starts = records_of_type(result, 's');
    ASSERT_EQ(starts.size(), 2u);
    EXPECT_DOUBLE_EQ(starts[0]->time, 0.0);
    EXPECT_NEAR(starts[1]->time, duration, 1e-12); // b starts exactly when a ends
    EXPECT_NEAR(result.makespan, 2.0 * duration, 1e-12);
}

TEST(Scheduling, ParallelWhenCoresSuffice) {
    auto platform = single_host_platform(i5_host());
    auto wl = jobs({job("a", 0, 3, 36e9), job("b", 0, 3, 36e9)});
    SimulationResult result = run_simulation(platform, wl, {}, carbon_on());

    auto starts = records_of_type(result, 's');
    ASSERT_EQ(starts.size(), 2u);
    EXPECT_DOUBLE_EQ(starts[0]->time, 0.0);
    EXPECT_DOUBLE_EQ(starts[1]->time, 0.0);
    EXPECT_NEAR(result.makespan, 36e9 / (3 * 12e9), 1e-12);
}

TEST(Scheduling, OversizedJobRejected) {
    auto platform = single_host_platform(i5_host());
    auto wl = jobs({job("big", 0, 8, 1e9), job("ok", 0, 6, 72e9)});
    SimulationResult result = run_simulation(platform, wl, {}, carbon_on());

    ASSERT_EQ(result.rejected_jobs.size(), 1u);
    EXPECT_EQ(result.rejected_jobs[0].job_id, "big");
    // Simulation continues: the valid job ran.
    EXPECT_NEAR(result.makespan, 1.0, 1e-12);
    EXPECT_EQ(records_of_type(result, 's').size(), 1u);
}

TEST(Scheduling, StrictSubmitOrderHeadOfLineBlocking) {
    // a takes 4 cores for 10 s; b (4 cores) must wait; c (2 cores) would
    // fit at submit but FCFS keeps it behind b.
    auto platform = single_host_platform(i5_host(1.0, 0.0)); // 1 GFLOP/s per core
    auto wl = jobs({job("a", 0, 4, 40e9), job("b", 1, 4, 40e9), job("c", 2, 2, 2e9)});
    SimulationResult result = run_simulation(platform, wl, {}, carbon_on());

    auto starts = records_of_type(result, 's');
    ASSERT_EQ(starts.size(), 3u);
    EXPECT_DOUBLE_EQ(starts[0]->time, 0.0);   // a
    EXPECT_DOUBLE_EQ(starts[1]->time, 10.0);  // b waits for a's cores
    EXPECT_DOUBLE_EQ(starts[2]->time, 10.0);  // c runs beside b, not before it
}

TEST(Scheduling, JobWaitsForPowerOn) {
    auto platform = single_host_platform(i5_host(1.0, 0.0));
    auto events = parse_events("0,Intel_i5_11400H,power_off\n50,Intel_i5_11400H,power_on\n");
    auto wl = jobs({job("j", 10, 6, 60e9)});
    SimulationResult result = run_simulation(platform, wl, events, carbon_on());

    auto starts = records_of_type(result, 's');
    ASSERT_EQ(starts.size(), 1u);
    EXPECT_DOUBLE_EQ(starts[0]->time, 50.0);
    EXPECT_NEAR(result.makespan, 60.0, 1e-12);
}

TEST(Scheduling, StarvedJobReportedWhenSimulationEnds) {
    auto platform = single_host_platform(i5_host(1.0, 0.0));
    auto events = parse_events("0,Intel_i5_11400H,power_off\n");
    auto wl = jobs({job("j", 10, 6, 60e9)});
    SimulationResult result = run_simulation(platform, wl, events, carbon_on());

    ASSERT_EQ(result.rejected_jobs.size(), 1u);
    EXPECT_EQ(result.rejected_jobs[0].job_id, "j");
    EXPECT_TRUE(records_of_type(result, 's').empty());
    EXPECT_FALSE(result.warnings.empty());
}

TEST(PowerEvents, PreemptionUnsupported) {
    auto platform = single_host_platform(i5_host(1.0, 0.0));
    auto events = parse_events("5,Intel_i5_11400H,power_off\n");
    auto wl = jobs({job("j", 0, 6, 60e9)}); // runs for 10 s
    EXPECT_THROW(run_simulation(platform, wl, events, carbon_on()), PreemptionUnsupported);
}

TEST(PowerEvents, RedundantTransitionsWarnWithoutRecords) {
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    auto events = parse_events("5,Intel_i5_11400H,power_on\n"
                               "10,Intel_i5_11400H,power_off\n"
                               "15,Intel_i5_11400H,power_off\n");
    SimulationResult result = run_simulation(platform, {}, events, carbon_on());
    // Only the real Off transition produced a record.
    ASSERT_EQ(result.trace.size(), 1u);
    EXPECT_DOUBLE_EQ(result.trace[0].time, 10.0);
    EXPECT_EQ(result.warnings.size(), 2u);
}

TEST(PowerEvents, EqualTimeEventsApplyInHostIdOrder) {
    PlatformSpec platform;
    platform.hosts.push_back(i5_host());
    platform.hosts.push_back(host("aaa", 2, 1e9, profile(5, 10, 20, 0.5), 0.0));
    // File lists the i5 host first; the 'p' records still come out in
    // lexicographic host order at the shared timestamp.
    auto events = parse_events("10,Intel_i5_11400H,power_off\n10,aaa,power_off\n");
    SimulationResult result = run_simulation(platform, {}, events, carbon_on());
    ASSERT_EQ(result.trace.size(), 2u);
    EXPECT_DOUBLE_EQ(result.trace[0].time, 10.0);
    EXPECT_DOUBLE_EQ(result.trace[1].time, 10.0);
    // Same-host pair keeps file order; across hosts "Intel..." < "aaa" by
    // byte comparison, so the i5 record leads.
    EXPECT_EQ(result.warnings.size(), 0u);
}

TEST(PowerEvents, SameHostSameTimeKeepsFileOrder) {
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    // Off then on at the same instant: net effect is On, two real changes.
    auto events = parse_events("10,Intel_i5_11400H,power_off\n10,Intel_i5_11400H,power_on\n");
    SimulationResult result = run_simulation(platform, {}, events, carbon_on(20.0));
    ASSERT_EQ(result.trace.size(), 2u);
    EXPECT_TRUE(result.warnings.empty());
    // Host ended On: idle draw for the full 20 s.
    EXPECT_NEAR(result.per_host_summary[0].energy_j, 200.0, 1e-9 * 200.0);
}

TEST(PowerEvents, UnknownHostIsAnError) {
    auto platform = single_host_platform(i5_host());
    auto events = parse_events("5,nope,power_on\n");
    EXPECT_THROW(run_simulation(platform, {}, events, carbon_on()), Error);
}

TEST(SetCiEvents, TwoIntervalPricing) {
    // 10 W idle, CI 100 then 200 at 3600, end at 7200: 1 g + 2 g.
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    auto events = parse_events("3600,Intel_i5_11400H,set_ci,200\n");
    SimulationResult result = run_simulation(platform, {}, events, carbon_on(7200.0));
    EXPECT_NEAR(result.per_host_summary[0].carbon_g, 3.0, 1e-9);
    EXPECT_TRUE(result.trace.empty()); // set_ci emits no trace record
}

TEST(SetCiEvents, SameValueIsNoOpOnTotals) {
    auto platform = single_host_platform(i5_host(12.0, 100.0));
    auto wl = jobs({job("j", 0, 6, 182e9)});
    auto baseline = run_simulation(platform, wl, {}, carbon_on(3600.0));
    auto with_noop =
        run_simulation(platform, wl, parse_events("100,Intel_i5_11400H,set_ci,100\n"),
                       carbon_on(3600.0));
    EXPECT_DOUBLE_EQ(baseline.per_host_summary[0].energy_j,
                     with_noop.per_host_summary[0].energy_j);
    EXPECT_DOUBLE_EQ(baseline.per_host_summary[0].carbon_g,
                     with_noop.per_host_summary[0].carbon_g);
}

TEST(StepTraces, BreakpointsSettleExactly) {
    HostSpec host = i5_host();
    host.ci_source = CiSourceRef::trace("mix.csv");
    SimulationOptions options = carbon_on(7200.0);
    options.ci_traces["mix.csv"] = CarbonIntensitySeries::step({{0, 100}, {3600, 200}});
    SimulationResult result = run_simulation(single_host_platform(host), {}, {}, options);
    EXPECT_NEAR(result.per_host_summary[0].carbon_g, 3.0, 1e-9);
}

TEST(StepTraces, MissingTraceIsAnError) {
    HostSpec host = i5_host();
    host.ci_source = CiSourceRef::trace("mix.csv");
    EXPECT_THROW(run_simulation(single_host_platform(host), {}, {}, carbon_on()), Error);
}

TEST(CarbonToggle, DisabledRunMatchesEnabledExceptCarbon) {
    auto platform = single_host_platform(i5_host(12.0, 98.348));
    auto wl = jobs({job("a", 0, 6, 182e9), job("b", 3, 2, 50e9)});
    auto events = parse_events("1,Intel_i5_11400H,set_ci,140\n");

    SimulationOptions on = carbon_on(4000.0);
    SimulationOptions off = on;
    off.carbon_enabled = false;

    SimulationResult with = run_simulation(platform, wl, events, on);
    SimulationResult without = run_simulation(platform, wl, events, off);

    EXPECT_DOUBLE_EQ(with.makespan, without.makespan);
    ASSERT_EQ(with.trace.size(), without.trace.size());
    for (size_t i = 0; i < with.trace.size(); ++i) {
        EXPECT_DOUBLE_EQ(with.trace[i].time, without.trace[i].time);
        EXPECT_DOUBLE_EQ(with.trace[i].energy_j, without.trace[i].energy_j);
        EXPECT_EQ(with.trace[i].event_type, without.trace[i].event_type);
        EXPECT_DOUBLE_EQ(without.trace[i].carbon_g, 0.0);
        EXPECT_DOUBLE_EQ(without.trace[i].ecarbon_g_per_s, 0.0);
    }
    EXPECT_DOUBLE_EQ(with.per_host_summary[0].energy_j, without.per_host_summary[0].energy_j);
    EXPECT_DOUBLE_EQ(without.per_host_summary[0].carbon_g, 0.0);
    EXPECT_GT(with.per_host_summary[0].carbon_g, 0.0);
}

TEST(Determinism, IdenticalInputsIdenticalSerializedResults) {
    std::mt19937 rng(31415);
    PlatformSpec platform = random_platform(rng, 3);
    Workload wl = random_workload(rng, platform, 12);

    SimulationResult a = run_simulation(platform, wl, {}, carbon_on(1000.0));
    SimulationResult b = run_simulation(platform, wl, {}, carbon_on(1000.0));

    EXPECT_EQ(render_trace(a.trace), render_trace(b.trace));
    EXPECT_EQ(render_summary(a.per_host_summary), render_summary(b.per_host_summary));
    EXPECT_EQ(a.makespan, b.makespan);
}

TEST(RefinementInvariance, ExtraSettlementChangesNothing) {
    // A same-value set_ci forces a settlement without changing P or CI.
    std::mt19937 rng(555);
    auto platform = single_host_platform(i5_host(12.0, 98.348));
    auto wl = jobs({job("a", 0, 6, 182e9), job("b", 1, 3, 90e9)});
    SimulationResult baseline = run_simulation(platform, wl, {}, carbon_on(500.0));

    std::uniform_real_distribution<double> at(0.0, 500.0);
    for (int i = 0; i < 25; ++i) {
        auto forced =
            parse_events(std::to_string(at(rng)) + ",Intel_i5_11400H,set_ci,98.348\n");
        SimulationResult refined = run_simulation(platform, wl, forced, carbon_on(500.0));
        EXPECT_NEAR(refined.per_host_summary[0].energy_j, baseline.per_host_summary[0].energy_j,
                    1e-9 * baseline.per_host_summary[0].energy_j);
        EXPECT_NEAR(refined.per_host_summary[0].carbon_g, baseline.per_host_summary[0].carbon_g,
                    1e-9 * baseline.per_host_summary[0].carbon_g);
    }
}

TEST(Makespan, SerializedFullHostJobsScaleLinearly) {
    auto platform = single_host_platform(i5_host(1.0, 0.0));
    double duration = 60e9 / (6 * 1e9); // 10 s
    for (int n : {1, 3, 7}) {
        std::vector<Job> list;
        for (int i = 0; i < n; ++i)
            list.push_back(job("j" + std::to_string(i), 0, 6, 60e9));
        SimulationResult result = run_simulation(platform, jobs(std::move(list)), {}, carbon_on());
        EXPECT_NEAR(result.makespan, n * duration, 1e-9 * n * duration);
    }
}

TEST(Engine, CarbonPluginRegistrationRules) {
    auto platform = single_host_platform(i5_host());
    Engine engine(platform, {});
    auto handle = engine.register_carbon_plugin();
    EXPECT_TRUE(handle.active);
    EXPECT_THROW(engine.register_carbon_plugin(), Error); // double registration
    engine.run({}, {});
    EXPECT_THROW(engine.run({}, {}), Error); // single-shot

    Engine late(platform, {});
    late.run({}, {});
    EXPECT_THROW(late.register_carbon_plugin(), Error); // after run
}

TEST(Engine, InvalidPlatformRejectedAtConstruction) {
    PlatformSpec bad;
    bad.hosts.push_back(host("h", 0, 1e9, profile(1, 2, 3, 0), 0.0));
    EXPECT_THROW(Engine(bad, {}), Error);
}

TEST(Engine, ZeroFlopJobStartsAndEndsAtSameInstant) {
    auto platform = single_host_platform(i5_host());
    auto wl = jobs({job("instant", 5, 6, 0)});
    SimulationResult result = run_simulation(platform, wl, {}, carbon_on());
    ASSERT_EQ(result.trace.size(), 2u);
    EXPECT_EQ(result.trace[0].event_type, 's');
    EXPECT_EQ(result.trace[1].event_type, 'e');
    EXPECT_DOUBLE_EQ(result.trace[0].time, 5.0);
    EXPECT_DOUBLE_EQ(result.trace[1].time, 5.0);
    EXPECT_DOUBLE_EQ(result.makespan, 5.0);
}

TEST(Engine, ScheduleSanityOnRandomScenarios) {
    std::mt19937 rng(20250810);
    for (int iter = 0; iter < 30; ++iter) {
        PlatformSpec platform = random_platform(rng, 4);
        Workload wl = random_workload(rng, platform, 15);
        SimulationResult result = run_simulation(platform, wl, {}, carbon_on());

        // Trace times never decrease; platform cumulatives never decrease.
        for (size_t i = 1; i < result.trace.size(); ++i) {
            EXPECT_GE(result.trace[i].time, result.trace[i - 1].time);
            EXPECT_GE(result.trace[i].energy_j, result.trace[i - 1].energy_j);
            EXPECT_GE(result.trace[i].carbon_g, result.trace[i - 1].carbon_g);
        }
        // Every accepted job produced exactly one start and one end.
        size_t accepted = wl.jobs.size() - result.rejected_jobs.size();
        EXPECT_EQ(records_of_type(result, 's').size(), accepted);
        EXPECT_EQ(records_of_type(result, 'e').size(), accepted);
    }
}
