#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellipsec/config.hpp"
#include "ellipsec/csv.hpp"
#include "ellipsec/experiments.hpp"

using namespace ellipsec;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() /
              ("ellipsec_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig config_from(const std::string& text) {
    return ExperimentConfig::parse(KeyValueConfig::from_string(text));
}

}  // namespace

TEST_CASE("key value parsing") {
    const KeyValueConfig kv = KeyValueConfig::from_string(
        "# leading comment\n"
        "\n"
        "  p =  1.5  # trailing comment\n"
        "n_grid = 2, 4 ,8\n"
        "seed = 12345678901234567890\n"
        "q = inf\n"
        "name = decay\n");
    CHECK(kv.has("p"));
    CHECK_FALSE(kv.has("missing"));
    CHECK(kv.get_double("p", 0.0) == 1.5);
    CHECK(kv.get_double("absent", 7.0) == 7.0);
    CHECK(std::isinf(kv.get_double("q", 0.0)));
    CHECK(kv.get_u64("seed", 0) == 12345678901234567890ull);
    CHECK(kv.get_string("name", "") == "decay");
    const std::vector<int> grid = kv.get_int_list("n_grid");
    REQUIRE(grid.size() == 3);
    CHECK(grid[0] == 2);
    CHECK(grid[2] == 8);
    CHECK(kv.get_int_list("absent").empty());

    KeyValueConfig copy = kv;
    copy.set("p", "2");
    CHECK(copy.get_double("p", 0.0) == 2.0);

    CHECK_THROWS_WITH_AS(KeyValueConfig::from_string("a = 1\nb = 2\nnonsense\n"),
                         "config: line 3 is not key = value", std::invalid_argument);
    CHECK_THROWS_WITH_AS(KeyValueConfig::from_string(" = 3\n"),
                         "config: empty key on line 1", std::invalid_argument);
}

TEST_CASE("key value typed getter failures") {
    const KeyValueConfig kv = KeyValueConfig::from_string(
        "p = abc\n"
        "n = 3x\n"
        "grid = 1,two\n"
        "empty_list =\n");
    CHECK_THROWS_AS(kv.get_double("p", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kv.get_int("n", 0), std::invalid_argument);
    CHECK_THROWS_AS(kv.get_int_list("grid"), std::invalid_argument);
    CHECK_THROWS_AS(kv.get_int_list("empty_list"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(kv.require_known({"p", "n", "grid"}),
                         "config: unknown key 'empty_list'", std::invalid_argument);
    CHECK_NOTHROW(kv.require_known({"p", "n", "grid", "empty_list"}));
}

TEST_CASE("experiment config defaults and validation") {
    const ExperimentConfig cfg = config_from("experiment = radius\nlambda = 1\nn_grid = 2,4\n");
    CHECK(cfg.experiment == "radius");
    CHECK(cfg.p.value() == 2.0);
    CHECK(cfg.trials == 50);
    CHECK(cfg.seed == 0);
    CHECK(cfg.method == "auto");
    CHECK(cfg.threads == 1);
    CHECK(cfg.m_factor == 8);
    CHECK(cfg.q == 2.0);
    CHECK(cfg.constant_C == 1.0);
    CHECK(cfg.condition_D == 1.0);
    CHECK(cfg.rip_C1 == 1.0);
    CHECK(cfg.k_fraction == 0.25);
    CHECK(cfg.epsilon == 0.25);
    CHECK(cfg.s_sparse == 3);
    CHECK(cfg.probe_count == 8);
    CHECK(cfg.out_dir == ".");
    CHECK(cfg.resolved_m() == 32);  // m_factor * max n

    CHECK(config_from("m_factor = 4\nlambda = 1\nn_grid = 2,4\n").resolved_m() == 16);
    CHECK(config_from("m = 24\nlambda = 1\nn_grid = 2,4\n").resolved_m() == 24);

    CHECK_THROWS_AS(config_from("bogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("lambda = -0.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("lambda = 1\nsigma_file = profile.csv\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from("n_grid = 4,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("n_grid = 2,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("n_grid = 0,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("m_factor = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("m = 1\nlambda = 1\n").resolved_m(), std::invalid_argument);
    CHECK_THROWS_AS(config_from("lambda = 1\n").resolved_m(), std::invalid_argument);
    CHECK_THROWS_AS(config_from("trials = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("method = fancy\n"), std::invalid_argument);
    // The method/exponent pairing is checked when a run resolves the method.
    CHECK(config_from("method = exact_p2\np = 1.5\n").method == "exact_p2");
    CHECK_THROWS_AS(config_from("threads = -1\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("q = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("k_fraction = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("epsilon = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("epsilon = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("s = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_from("probe_count = -1\n"), std::invalid_argument);
}

TEST_CASE("profile resolution") {
    const ExperimentConfig poly = config_from("lambda = 1\nm = 4\n");
    const Semiaxes sp = poly.resolve_sigma(4);
    CHECK(sp.at(1) == 1.0);
    CHECK(sp.at(2) == doctest::Approx(0.5));
    CHECK(sp.at(4) == doctest::Approx(0.25));
    CHECK(poly.lambda_tag() == "1");

    const ExperimentConfig flat = config_from("lambda = 0\nm = 3\n");
    const Semiaxes sf = flat.resolve_sigma(3);
    CHECK(sf.at(1) == 1.0);
    CHECK(sf.at(3) == 1.0);

    CHECK(config_from("lambda = 1.5\nm = 4\n").lambda_tag() == "1.5");

    Scratch tmp;
    {
        CsvWriter w(tmp.path("profile.csv"), {"sigma"});
        w.row({"2.0"});
        w.row({"1.0"});
        w.row({"0.25"});
    }
    const ExperimentConfig file =
        config_from("sigma_file = " + tmp.path("profile.csv") + "\nm = 3\n");
    const Semiaxes sc = file.resolve_sigma(3);
    CHECK(sc.at(1) == 2.0);
    CHECK(sc.at(3) == 0.25);
    CHECK(file.lambda_tag() == "custom");
    CHECK_THROWS_AS(file.resolve_sigma(4), std::invalid_argument);
    CHECK_THROWS_AS(config_from("m = 3\n").resolve_sigma(3), std::invalid_argument);
}

TEST_CASE("wilson interval oracle values") {
    const Interval mid = wilson_interval(8, 10);
    CHECK(mid.lower == doctest::Approx(0.4901624715366418).epsilon(1e-12));
    CHECK(mid.upper == doctest::Approx(0.9433178485456247).epsilon(1e-12));

    const Interval none = wilson_interval(0, 10);
    CHECK(none.lower == 0.0);
    CHECK(none.upper == doctest::Approx(0.2775327998628892).epsilon(1e-12));

    const Interval all = wilson_interval(10, 10);
    CHECK(all.lower == doctest::Approx(0.7224672001371106).epsilon(1e-12));
    CHECK(all.upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(all.upper <= 1.0);

    const Interval rare = wilson_interval(1, 2000);
    CHECK(rare.lower == doctest::Approx(8.826773070546781e-05).epsilon(1e-9));
    CHECK(rare.upper == doctest::Approx(0.0028268625032662133).epsilon(1e-9));

    CHECK_THROWS_AS(wilson_interval(-1, 10), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(11, 10), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
}

TEST_CASE("csv writer quoting and roundtrip") {
    Scratch tmp;
    const std::string path = tmp.path("table.csv");
    {
        CsvWriter w(path, {"a", "b"});
        w.row({"plain", "with,comma"});
        w.row({"quote\"inside", csv_field(0.1)});
        CHECK_THROWS_AS(w.row({"only one"}), std::invalid_argument);
    }
    const std::string bytes = slurp(path);
    CHECK(bytes ==
          "a,b\r\n"
          "plain,\"with,comma\"\r\n"
          "\"quote\"\"inside\",0.10000000000000001\r\n");

    const CsvTable table = read_csv(path);
    REQUIRE(table.header.size() == 2);
    CHECK(table.column("b") == 1);
    CHECK(table.column("absent") == -1);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == "with,comma");
    CHECK(table.rows[1][0] == "quote\"inside");
    CHECK(std::stod(table.rows[1][1]) == 0.1);

    CHECK_THROWS_AS(read_csv(tmp.path("missing.csv")), std::runtime_error);
    CHECK_THROWS_AS(CsvWriter(path, {}), std::invalid_argument);
}

TEST_CASE("decay run produces tables and a slope") {
    Scratch tmp;
    ExperimentConfig cfg = config_from(
        "experiment = decay\np = 2\nlambda = 1\nn_grid = 2,4\nm = 16\n"
        "trials = 4\nseed = 9\nthreads = 1\nout = " + tmp.path(""));
    const DecayOutput out = run_decay(cfg);
    REQUIRE(out.files.size() == 2);
    CHECK(out.warning.empty());
    CHECK(out.slope < 0.0);
    CHECK(out.constant_hat > 0.0);

    const CsvTable trials = read_csv(out.files[0]);
    CHECK(trials.rows.size() == 8);
    CHECK(trials.column("radius") >= 0);
    CHECK(trials.column("floor_ok") >= 0);
    const CsvTable summary = read_csv(out.files[1]);
    REQUIRE(summary.rows.size() == 2);
    const int n_col = summary.column("n");
    const int med_col = summary.column("median");
    const int floor_col = summary.column("floor");
    REQUIRE(n_col >= 0);
    REQUIRE(med_col >= 0);
    REQUIRE(floor_col >= 0);
    CHECK(summary.rows[0][static_cast<size_t>(n_col)] == "2");
    CHECK(summary.rows[1][static_cast<size_t>(n_col)] == "4");
    for (const auto& row : summary.rows) {
        const double median = std::stod(row[static_cast<size_t>(med_col)]);
        const double floor = std::stod(row[static_cast<size_t>(floor_col)]);
        CHECK(median >= floor - 1e-12);
    }

    // Shallow profiles keep running but carry a warning.
    ExperimentConfig shallow = cfg;
    shallow.lambda = 0.4;
    CHECK_FALSE(run_decay(shallow).warning.empty());

    ExperimentConfig single = cfg;
    single.n_grid = {2};
    CHECK_THROWS_AS(run_decay(single), std::invalid_argument);
}

TEST_CASE("runner preconditions are enforced") {
    Scratch tmp;
    const std::string tail = "\nn_grid = 2,4\nm = 16\ntrials = 2\nout = " + tmp.path("");

    CHECK_THROWS_AS(run_dichotomy(config_from("p = 2.5\nlambda = 0.25\nn = 2\nm_grid = 8" +
                                              tail)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_dichotomy(config_from("p = 1\nlambda = 0.25\nn = 2\nm_grid = 8" + tail)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_dichotomy(config_from("p = 2\nlambda = 0.25\nm_grid = 8" + tail)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_lower_probe(config_from("p = 3\nlambda = 0.25\nn = 2\nm_grid = 8" +
                                                tail)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_recovery_sweep(config_from("p = 1.5\nlambda = 1\nq = 2" + tail)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_recovery_sweep(config_from("p = 1\nlambda = 1\nq = 2\ns = 9" + tail)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_bound_audit(config_from(
                        "p = 2\nlambda = 1\nn_grid = 4\nm = 16\ntrials = 2\nout = " +
                        tmp.path(""))),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_gelfand_table(config_from("p = 2\nlambda = 1\nm = 16\nout = " +
                                                  tmp.path(""))),
                    std::invalid_argument);
    // Grid points at or above the ambient dimension are rejected.
    CHECK_THROWS_AS(run_radius_table(config_from(
                        "p = 2\nlambda = 1\nn_grid = 2,16\nm = 16\ntrials = 2\nout = " +
                        tmp.path(""))),
                    std::invalid_argument);
    // The closed-form method only applies to the Euclidean body.
    CHECK_THROWS_AS(run_radius_table(config_from(
                        "p = 1.5\nmethod = exact_p2\nlambda = 1\nn_grid = 2\nm = 8\n"
                        "trials = 1\nout = " + tmp.path(""))),
                    std::invalid_argument);
}

TEST_CASE("bound table rows by regime") {
    Scratch tmp;
    const std::string path = run_gelfand_table(config_from(
        "experiment = gelfand\np = 2\nq = 2\nlambda = 1\nn_grid = 2,4\nm = 16\nout = " +
        tmp.path("")));
    const CsvTable table = read_csv(path);
    REQUIRE(table.rows.size() == 4);  // exact_tail + mean_width per grid point
    const int kind_col = table.column("theorem");
    const int value_col = table.column("value");
    const int n_col = table.column("n");
    REQUIRE(kind_col >= 0);
    const Semiaxes sigma = Semiaxes::polynomial(16, 1.0);
    int exact_rows = 0;
    for (const auto& row : table.rows) {
        if (row[static_cast<size_t>(kind_col)] != "exact_tail") continue;
        ++exact_rows;
        const int n = std::stoi(row[static_cast<size_t>(n_col)]);
        // p = q = 2: the minimal radius is the first omitted semiaxis.
        CHECK(std::stod(row[static_cast<size_t>(value_col)]) ==
              doctest::Approx(sigma.at(n + 1)));
    }
    CHECK(exact_rows == 2);

    const std::string sparse = run_gelfand_table(config_from(
        "experiment = gelfand\np = 0.5\nq = 2\nlambda = 1\nn_grid = 2,4\nm = 16\nout = " +
        tmp.path("")));
    const CsvTable qt = read_csv(sparse);
    REQUIRE(qt.rows.size() == 2);
    for (const auto& row : qt.rows) {
        CHECK(row[static_cast<size_t>(qt.column("theorem"))] == "sparse_regime");
    }
}

TEST_CASE("plot data conversion") {
    Scratch tmp;

    // Phase diagram needs no input table: 50 x 50 cells plus one header.
    const std::string phase = tmp.path("phase.tsv");
    emit_plotdata("", "phase_diagram", phase);
    std::ifstream in(phase);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 2501);
    CHECK(lines[0] == "inv_p\tlambda\tregion\trandom_flag\trandom_decay\tminimal_decay");
    // First cell: p = inf, lambda = 1.4 / 50 -> useless band, no decay order.
    CHECK(lines[1].substr(0, 2) == "0\t");
    CHECK(lines[1].find("useless") != std::string::npos);

    // Log-log input from a summary table passes medians through.
    {
        CsvWriter w(tmp.path("summary.csv"), {"n", "median", "bound"});
        w.row({"2", "0.5", "0.9"});
        w.row({"4", "0.25", "0.45"});
    }
    emit_plotdata(tmp.path("summary.csv"), "loglog_decay", tmp.path("loglog.tsv"));
    CHECK(slurp(tmp.path("loglog.tsv")) ==
          "n\tmedian_radius\tbound\n2\t0.5\t0.9\n4\t0.25\t0.45\n");

    // Trial tables aggregate the radius column per n.
    {
        CsvWriter w(tmp.path("trials.csv"), {"n", "radius"});
        w.row({"2", "1.0"});
        w.row({"2", "3.0"});
        w.row({"2", "2.0"});
        w.row({"4", "1.0"});
    }
    emit_plotdata(tmp.path("trials.csv"), "loglog_decay", tmp.path("agg.tsv"));
    CHECK(slurp(tmp.path("agg.tsv")) == "n\tmedian_radius\tbound\n2\t2\t\n4\t1\t\n");

    // Probability curves pass frequency tables through...
    {
        CsvWriter w(tmp.path("freq.csv"), {"m", "frequency", "wilson_lo", "wilson_hi"});
        w.row({"8", "0.75", "0.5", "0.9"});
    }
    emit_plotdata(tmp.path("freq.csv"), "probability_curve", tmp.path("freq.tsv"));
    CHECK(slurp(tmp.path("freq.tsv")) ==
          "m\tfrequency\twilson_lo\twilson_hi\n8\t0.75\t0.5\t0.9\n");

    // ...and rebuild them from raw indicator rows.
    {
        CsvWriter w(tmp.path("events.csv"), {"m", "lemma_event"});
        w.row({"8", "1"});
        w.row({"8", "0"});
        w.row({"8", "1"});
        w.row({"8", "1"});
    }
    emit_plotdata(tmp.path("events.csv"), "probability_curve", tmp.path("events.tsv"));
    const std::string events = slurp(tmp.path("events.tsv"));
    const Interval ci = wilson_interval(3, 4);
    CHECK(events == "m\tfrequency\twilson_lo\twilson_hi\n8\t0.75\t" + csv_field(ci.lower) +
                        "\t" + csv_field(ci.upper) + "\n");

    {
        CsvWriter w(tmp.path("empty.csv"), {"n", "median"});
    }
    emit_plotdata(tmp.path("empty.csv"), "loglog_decay", tmp.path("empty.tsv"));
    CHECK(slurp(tmp.path("empty.tsv")) == "n\tmedian_radius\tbound\n");

    CHECK_THROWS_AS(emit_plotdata(tmp.path("summary.csv"), "pie_chart", tmp.path("x.tsv")),
                    std::invalid_argument);
    CHECK_THROWS_AS(emit_plotdata(tmp.path("summary.csv"), "probability_curve",
                                  tmp.path("x.tsv")),
                    std::invalid_argument);
}

TEST_CASE("experiment output is reproducible across runs") {
    Scratch a;
    Scratch b;
    const std::string shared =
        "experiment = probe\np = 2\nlambda = 0.25\nn = 2\nm_grid = 8,16\n"
        "trials = 12\nseed = 5\nthreads = 1\nout = ";
    const ProbeOutput first = run_lower_probe(config_from(shared + a.path("")));
    const ProbeOutput second = run_lower_probe(config_from(shared + b.path("")));
    REQUIRE(first.files.size() == second.files.size());
    for (size_t i = 0; i < first.files.size(); ++i) {
        CHECK(slurp(first.files[i]) == slurp(second.files[i]));
    }

    const ExperimentConfig rec = config_from(
        "experiment = recover\np = 1\nq = 2\nlambda = 1\nn_grid = 6\nm = 16\ns = 2\n"
        "trials = 5\nseed = 5\nthreads = 1\nout = " + a.path(""));
    const RecoveryOutput r1 = run_recovery_sweep(rec);
    CHECK(r1.total == 5);
    CHECK(r1.successes >= 0);
    const CsvTable rt = read_csv(r1.files[0]);
    CHECK(rt.rows.size() == 5);
    CHECK(rt.column("success") >= 0);
    CHECK(rt.column("error_q") >= 0);
}
