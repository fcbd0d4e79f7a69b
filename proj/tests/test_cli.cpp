#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("primegen_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CommandResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("out_" + std::to_string(counter));
    const fs::path err = work_dir() / ("err_" + std::to_string(counter));
    ++counter;
    const std::string command = std::string("\"") + PG_CLI_PATH + "\" " +
                                args + " > " + out.string() + " 2> " +
                                err.string();
    const int status = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("help exits 0, bad usage exits 2") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("sweep --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("simulate --pool-size 100 --system-size 8").exit_code ==
          2);  // seed is mandatory
    CHECK(run_cli("simulate --pool-size 100 --system-size 8 --seed 1 "
                  "--format yaml")
              .exit_code == 2);
    CHECK(run_cli("sweep --pool-size 100 --n-grid 8:4 --seed 1").exit_code ==
          2);
    CHECK(run_cli("simulate --pool-size 2 --system-size 8 --seed 1")
              .exit_code == 2);
}

TEST_CASE("simulate emits one record with the sweep schema") {
    const auto result = run_cli(
        "simulate --pool-size 256 --system-size 8 --realizations 50 "
        "--seed 7");
    REQUIRE(result.exit_code == 0);
    const auto rows = lines_of(result.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "M,N,R,P,P_stderr,r_mean,tau,truncated");
    CHECK(rows[1].substr(0, 9) == "256,8,50,");
    CHECK(result.err.find("# config: command=simulate") != std::string::npos);
}

TEST_CASE("simulate json mirrors the record") {
    const auto result = run_cli(
        "simulate --pool-size 256 --system-size 8 --realizations 50 "
        "--seed 7 --format json");
    REQUIRE(result.exit_code == 0);
    const auto record = nlohmann::json::parse(result.out);
    CHECK(record["M"] == 256);
    CHECK(record["N"] == 8);
    CHECK(record["R"] == 50);
    CHECK(record.contains("P"));
    CHECK(record.contains("P_stderr"));
    CHECK(record.contains("r_mean"));
    CHECK(record.contains("tau"));
    CHECK(record.contains("truncated"));
    CHECK(record["reliable"] == true);
}

TEST_CASE("identical invocations are byte-identical across worker counts") {
    const fs::path a = work_dir() / "det_a.csv";
    const fs::path b = work_dir() / "det_b.csv";
    const std::string base =
        "sweep --pool-size 512 --n-grid 4:12:4 --realizations 40 --seed 99 ";
    REQUIRE(run_cli(base + "--workers 1 -o " + a.string()).exit_code == 0);
    REQUIRE(run_cli(base + "--workers 4 -o " + b.string()).exit_code == 0);
    const std::string bytes_a = slurp(a);
    CHECK(bytes_a == slurp(b));
    CHECK(!bytes_a.empty());
    const auto rows = lines_of(bytes_a);
    REQUIRE(rows.size() == 4);  // header plus N = 4, 8, 12
    CHECK(rows[0] == "M,N,R,P,P_stderr,r_mean,tau,truncated");
}

TEST_CASE("sweep accepts a comma grid and preserves order") {
    const auto result = run_cli(
        "sweep --pool-size 128 --n-grid 2,5,9 --realizations 30 --seed 3");
    REQUIRE(result.exit_code == 0);
    const auto rows = lines_of(result.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].substr(0, 6) == "128,2,");
    CHECK(rows[2].substr(0, 6) == "128,5,");
    CHECK(rows[3].substr(0, 6) == "128,9,");
}

TEST_CASE("distribution mass equals N times completed runs") {
    const auto result = run_cli(
        "distribution --pool-size 64 --system-size 6 --realizations 80 "
        "--seed 13");
    REQUIRE(result.exit_code == 0);
    const auto rows = lines_of(result.out);
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == "value,count");
    unsigned long long mass = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto comma = rows[k].find(',');
        REQUIRE(comma != std::string::npos);
        const unsigned long value = std::stoul(rows[k].substr(0, comma));
        CHECK(value >= 2);
        CHECK(value <= 64);
        mass += std::stoull(rows[k].substr(comma + 1));
    }
    CHECK(mass == 6ULL * 80ULL);
}

TEST_CASE("annealed table has the documented schema and sane q") {
    const auto result = run_cli(
        "annealed --pool-size 128 --n-grid 1:4 --samples 400 --seed 21");
    REQUIRE(result.exit_code == 0);
    const auto rows = lines_of(result.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "M,N,q,q_stderr,S");
    // N=1 has no pairs at all, so q is exactly 1.
    CHECK(rows[1] == "128,1,1,0,400");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].substr(0, 4) == "128,");
    }
}

TEST_CASE("fit powerlaw reads planted CSV columns") {
    const fs::path csv = work_dir() / "planted.csv";
    write_file(csv,
               "L,value\n"
               "1,2\n"
               "2,16\n"
               "3,54\n"
               "4,128\n");
    const auto result = run_cli("fit --mode powerlaw --input " + csv.string() +
                                " --x-col L --y-col value");
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.out);
    CHECK(report["mode"] == "powerlaw");
    CHECK(report["fit"]["exponent"].get<double>() ==
          doctest::Approx(3.0).epsilon(1e-9));
    CHECK(report["fit"]["amplitude"].get<double>() ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(report["fit"]["points_used"] == 4);
}

TEST_CASE("fit threshold consumes sweep tables and scales N_c with size") {
    // Planted tables with first_nonzero thresholds 12, 16, 22, 28.
    const std::vector<std::pair<unsigned, unsigned>> plan{
        {1024, 12}, {2048, 16}, {4096, 22}, {8192, 28}};
    std::string inputs;
    for (const auto& [m, n_c] : plan) {
        const fs::path csv =
            work_dir() / ("sweep_" + std::to_string(m) + ".csv");
        std::ostringstream body;
        body << "M,N,R,P,P_stderr,r_mean,tau,truncated\n";
        for (unsigned n = 8; n <= 34; n += 2) {
            const double p = n < n_c ? 0.0 : (n == n_c ? 0.05 : 0.9);
            body << m << ',' << n << ",100," << p << ",0.01,0.5,1.2,0\n";
        }
        write_file(csv, body.str());
        inputs += " " + csv.string();
    }
    const auto result = run_cli("fit --mode threshold --inputs" + inputs);
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.out);
    REQUIRE(report["points"].size() == 4);
    CHECK(report["points"][0]["N_c"] == 12.0);
    CHECK(report["points"][3]["N_c"] == 28.0);
    CHECK(report["fit"]["exponent"].get<double>() > 0.0);

    // All-zero P cannot yield a threshold: range error, exit 1.
    const fs::path flat = work_dir() / "flat.csv";
    write_file(flat,
               "M,N,R,P,P_stderr,r_mean,tau,truncated\n"
               "1024,8,100,0,0,0.1,1.0,0\n"
               "1024,10,100,0,0,0.1,1.0,0\n");
    CHECK(run_cli("fit --mode threshold --inputs " + flat.string())
              .exit_code == 1);
}

TEST_CASE("fit tau-peak locates the slow point per table") {
    std::string inputs;
    for (const unsigned m : {1024u, 2048u, 4096u}) {
        const fs::path csv =
            work_dir() / ("tau_" + std::to_string(m) + ".csv");
        std::ostringstream body;
        body << "M,N,R,P,P_stderr,r_mean,tau,truncated\n";
        // Peak tau at N = 20, higher peaks for larger M.
        for (unsigned n = 10; n <= 30; n += 5) {
            const double tau =
                (n == 20 ? 3.0 : 1.0) * std::log(static_cast<double>(m));
            body << m << ',' << n << ",100,0.5,0.01,0.5," << tau << ",0\n";
        }
        write_file(csv, body.str());
        inputs += " " + csv.string();
    }
    const auto result = run_cli("fit --mode tau-peak --inputs" + inputs);
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.out);
    REQUIRE(report["points"].size() == 3);
    for (const auto& point : report["points"]) {
        CHECK(point["N_at_peak"] == 20);
    }
}

TEST_CASE("collapse writes the rescaled table and scores quality") {
    const std::string curve =
        "M,N,R,P,P_stderr,r_mean,tau,truncated\n"
        "%M%,2,100,0,0,0.2,1.0,0\n"
        "%M%,4,100,0.3,0.01,0.4,1.5,0\n"
        "%M%,6,100,0.7,0.01,0.7,1.2,0\n"
        "%M%,8,100,1,0,1,1.0,0\n";
    const fs::path a = work_dir() / "c100.csv";
    const fs::path b = work_dir() / "c200.csv";
    std::string body_a = curve, body_b = curve;
    for (std::string* body : {&body_a, &body_b}) {
        const std::string m = body == &body_a ? "100" : "200";
        std::size_t at = 0;
        while ((at = body->find("%M%", at)) != std::string::npos) {
            body->replace(at, 3, m);
        }
    }
    write_file(a, body_a);
    write_file(b, body_b);

    const fs::path table = work_dir() / "collapsed.csv";
    // nu=1, beta=0, n_c=0 leaves (N, P) untouched, so identical P columns
    // collapse perfectly.
    const auto result =
        run_cli("collapse --inputs " + a.string() + " " + b.string() +
                " --nu 1 --beta 0 -o " + table.string());
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.out);
    CHECK(report["quality"].get<double>() ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report["curves"] == 2);

    const auto rows = lines_of(slurp(table));
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "M,x,y");
    CHECK(rows[1].substr(0, 4) == "100,");
    CHECK(rows[5].substr(0, 4) == "200,");

    // A single input is a usage error: the required flag demands >= 2.
    CHECK(run_cli("collapse --inputs " + a.string() +
                  " --nu 1 --beta 0 -o " + table.string())
              .exit_code == 2);

    // Identical invocation reproduces identical bytes.
    const fs::path again = work_dir() / "collapsed_again.csv";
    const auto rerun =
        run_cli("collapse --inputs " + a.string() + " " + b.string() +
                " --nu 1 --beta 0 -o " + again.string());
    REQUIRE(rerun.exit_code == 0);
    CHECK(slurp(table) == slurp(again));
    CHECK(result.out == rerun.out);
}

TEST_CASE("unwritable output path exits 1") {
    CHECK(run_cli("simulate --pool-size 64 --system-size 4 "
                  "--realizations 10 --seed 1 -o /nonexistent_dir/x.csv")
              .exit_code == 1);
}

TEST_CASE("missing input file exits 1") {
    CHECK(run_cli("fit --mode powerlaw --input /no/such/file.csv "
                  "--x-col a --y-col b")
              .exit_code == 1);
}
