#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// FORGECURVE_BIN is injected by the build: the path of the real CLI binary.
#ifndef FORGECURVE_BIN
#error "FORGECURVE_BIN must be defined"
#endif

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::path("cli_scratch");
    fs::create_directories(dir);
    return dir;
}

CmdResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto dir = scratch_dir();
    const auto out_path = dir / ("stdout_" + std::to_string(counter) + ".txt");
    const auto err_path = dir / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string("'") + FORGECURVE_BIN + "' " + args + " > '" +
                            out_path.string() + "' 2> '" + err_path.string() + "'";
    const int status = std::system(cmd.c_str());
    CmdResult res;
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string make_trace(int steps, double value) {
    std::ostringstream out;
    out << "step,delta\n";
    for (int i = 1; i <= steps; ++i) {
        out << i << ',' << value << '\n';
    }
    return out.str();
}

std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// A seeded random trace and the same trace scaled by a power of two, which
// multiplies every partial sum exactly and so must not move any trigger.
std::pair<std::string, std::string> random_trace_pair(int steps, double scale) {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    std::ostringstream base, scaled;
    base << "step,delta\n";
    scaled << "step,delta\n";
    for (int i = 1; i <= steps; ++i) {
        const double d = dist(rng);
        base << i << ',' << full_precision(d) << '\n';
        scaled << i << ',' << full_precision(d * scale) << '\n';
    }
    return {base.str(), scaled.str()};
}

// The fired column of a schedule_sim.csv, one char per row.
std::string fired_column(const fs::path& path) {
    std::ifstream in(path);
    std::string line, out;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(line.back());
    }
    return out;
}

// Shared knobs keeping CLI runs small: 2 tasks, 8 steps per task.
const std::string kTinyRun =
    "--set num_tasks=2 --set samples_per_task=40 --set num_classes=2 "
    "--set input_dim=4 --set 'hidden_dims=[8]' --set epochs_per_task=2";

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("metrics prints four-decimal OP and BWT") {
    const auto dir = scratch_dir();
    const auto path = dir / "golden_matrix.csv";
    write_file(path, "i,j,accuracy\n1,1,0.9\n1,2,0.7\n2,2,0.8\n");
    const auto res = run_cli("metrics '" + path.string() + "'");
    CHECK_EQ(res.exit_code, 0);
    CHECK_EQ(res.out, "OP=0.7500\nBWT=-0.2000\n");
}

TEST_CASE("metrics fails cleanly on single-task matrices") {
    const auto dir = scratch_dir();
    const auto path = dir / "single_matrix.csv";
    write_file(path, "i,j,accuracy\n1,1,0.9\n");
    const auto res = run_cli("metrics '" + path.string() + "'");
    CHECK_NE(res.exit_code, 0);
    CHECK_NE(res.err.find("error:"), std::string::npos);
}

TEST_CASE("metrics names the missing cell of an incomplete matrix") {
    const auto dir = scratch_dir();
    const auto path = dir / "holey_matrix.csv";
    write_file(path, "i,j,accuracy\n1,1,0.5\n2,2,0.6\n");
    const auto res = run_cli("metrics '" + path.string() + "'");
    CHECK_NE(res.exit_code, 0);
    CHECK_NE(res.err.find("(1, 2)"), std::string::npos);
}

TEST_CASE("metrics reports unreadable input") {
    const auto res = run_cli("metrics no_such_matrix.csv");
    CHECK_NE(res.exit_code, 0);
    CHECK_NE(res.err.find("error:"), std::string::npos);
}

TEST_CASE("missing subcommands and unknown keys are usage errors") {
    CHECK_NE(run_cli("").exit_code, 0);
    const auto res = run_cli("run --set bogus_key=3 --out cli_scratch/bogus");
    CHECK_NE(res.exit_code, 0);
    CHECK_NE(res.err.find("bogus_key"), std::string::npos);
}

TEST_CASE("run emits per-seed artifacts and a summary line") {
    const auto out = scratch_dir() / "run_a";
    const auto res =
        run_cli("run " + kTinyRun + " --seed 0 --out '" + out.string() + "'");
    CHECK_EQ(res.exit_code, 0);
    CHECK_NE(res.out.find("seed 0: OP="), std::string::npos);
    CHECK_NE(res.out.find("replay_events="), std::string::npos);
    CHECK_NE(res.out.find("aggregate: OP="), std::string::npos);
    CHECK(fs::exists(out / "steps_seed0.csv"));
    CHECK(fs::exists(out / "matrix_seed0.csv"));
    CHECK(fs::exists(out / "buffer_seed0.csv"));
    CHECK(fs::exists(out / "summary.json"));

    const auto steps = slurp(out / "steps_seed0.csv");
    CHECK_EQ(steps.rfind("task_index,global_step,step_in_task,delta,tau,mu,r,beta,"
                         "event,loss_task,loss_reg_scaled",
                         0),
             0);
}

TEST_CASE("two invocations with one seed produce identical artifacts") {
    const auto out_a = scratch_dir() / "det_a";
    const auto out_b = scratch_dir() / "det_b";
    const std::string args = "run " + kTinyRun + " --seed 7";
    CHECK_EQ(run_cli(args + " --out '" + out_a.string() + "'").exit_code, 0);
    CHECK_EQ(run_cli(args + " --out '" + out_b.string() + "'").exit_code, 0);
    const auto steps_a = slurp(out_a / "steps_seed7.csv");
    CHECK_FALSE(steps_a.empty());
    CHECK_EQ(steps_a, slurp(out_b / "steps_seed7.csv"));
    CHECK_EQ(slurp(out_a / "matrix_seed7.csv"), slurp(out_b / "matrix_seed7.csv"));
    CHECK_EQ(slurp(out_a / "buffer_seed7.csv"), slurp(out_b / "buffer_seed7.csv"));
}

TEST_CASE("no_replay runs log no replay or consolidation rows") {
    const auto out = scratch_dir() / "norep";
    const auto res = run_cli("run " + kTinyRun + " --mode no_replay --seed 0 --out '" +
                             out.string() + "'");
    CHECK_EQ(res.exit_code, 0);
    CHECK_NE(res.out.find("replay_events=0"), std::string::npos);
    const auto steps = slurp(out / "steps_seed0.csv");
    CHECK_EQ(steps.find(",replay,"), std::string::npos);
    CHECK_EQ(steps.find(",consolidation,"), std::string::npos);
}

TEST_CASE("end_only runs replay once per task after the first") {
    const auto out = scratch_dir() / "endonly";
    const auto res = run_cli("run " + kTinyRun +
                             " --set num_tasks=3 --mode end_only --seed 0 --out '" +
                             out.string() + "'");
    CHECK_EQ(res.exit_code, 0);
    CHECK_NE(res.out.find("replay_events=2"), std::string::npos);
}

TEST_CASE("simulate-schedule reports the canonical trigger steps") {
    const auto dir = scratch_dir();
    const auto trace = dir / "flat_trace.csv";
    write_file(trace, make_trace(800, 1.0));
    const auto out = dir / "sim_flat";
    const auto res = run_cli("simulate-schedule '" + trace.string() + "' --out '" +
                             out.string() + "'");
    CHECK_EQ(res.exit_code, 0);
    CHECK_NE(res.out.find("6 replay trigger(s) at step(s): 48 72 120 192 384 744"),
             std::string::npos);
    const auto sim = slurp(out / "schedule_sim.csv");
    CHECK_EQ(sim.rfind("step,delta,tau,fired", 0), 0);
    CHECK_EQ(count_lines(sim), 801);
}

TEST_CASE("simulated firing is unchanged under trace scaling") {
    const auto dir = scratch_dir();
    const auto base = dir / "scale_base.csv";
    const auto scaled = dir / "scale_up.csv";
    const auto traces = random_trace_pair(800, 128.0);
    write_file(base, traces.first);
    write_file(scaled, traces.second);
    const auto out_base = dir / "sim_base";
    const auto out_scaled = dir / "sim_scaled";
    CHECK_EQ(run_cli("simulate-schedule '" + base.string() + "' --out '" +
                     out_base.string() + "'")
                 .exit_code,
             0);
    CHECK_EQ(run_cli("simulate-schedule '" + scaled.string() + "' --out '" +
                     out_scaled.string() + "'")
                 .exit_code,
             0);
    const auto col = fired_column(out_base / "schedule_sim.csv");
    CHECK_EQ(col, fired_column(out_scaled / "schedule_sim.csv"));
    CHECK_NE(col.find('1'), std::string::npos);
}

TEST_CASE("a zero trace cannot calibrate and fails loudly") {
    const auto dir = scratch_dir();
    const auto trace = dir / "zero_trace.csv";
    write_file(trace, make_trace(100, 0.0));
    const auto res = run_cli("simulate-schedule '" + trace.string() + "' --out '" +
                             (dir / "sim_zero").string() + "'");
    CHECK_NE(res.exit_code, 0);
    CHECK_NE(res.err.find("error:"), std::string::npos);
}

TEST_CASE("malformed traces are rejected with their line number") {
    const auto dir = scratch_dir();
    const auto trace = dir / "bad_trace.csv";
    write_file(trace, "step,delta\n1,0.5\n2,oops\n");
    const auto res = run_cli("simulate-schedule '" + trace.string() + "' --out '" +
                             (dir / "sim_bad").string() + "'");
    CHECK_NE(res.exit_code, 0);
    CHECK_NE(res.err.find("line 3"), std::string::npos);
}

TEST_CASE("compare merges one row per cell plus per-mode aggregates") {
    const auto out = scratch_dir() / "cmp";
    const auto res = run_cli("compare " + kTinyRun +
                             " --mode forgecurve --mode no_replay --seed 1 --out '" +
                             out.string() + "'");
    CHECK_EQ(res.exit_code, 0);
    CHECK_NE(res.out.find("forgecurve: OP="), std::string::npos);
    CHECK_NE(res.out.find("no_replay: OP="), std::string::npos);

    const auto table = slurp(out / "compare.csv");
    CHECK_EQ(table.rfind("mode,seed,status,op,bwt,replay_events,wall_time_s,op_sd,bwt_sd",
                         0),
             0);
    // Header, two data cells, two aggregate rows.
    CHECK_EQ(count_lines(table), 5);
    CHECK_NE(table.find("forgecurve,1,ok,"), std::string::npos);
    CHECK_NE(table.find("no_replay,1,ok,"), std::string::npos);
    CHECK_NE(table.find("forgecurve,all,aggregate,"), std::string::npos);
    CHECK(fs::exists(out / "cells" / "forgecurve_seed1" / "steps.csv"));
    CHECK(fs::exists(out / "cells" / "no_replay_seed1" / "matrix.csv"));
}

TEST_CASE("compare requires at least one mode") {
    CHECK_NE(run_cli("compare --seed 1 --out cli_scratch/cmp_none").exit_code, 0);
}
