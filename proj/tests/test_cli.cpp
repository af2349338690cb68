#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "dwell_test_cli";

int run(const std::string& args)
{
    const std::string cmd = std::string(DWELL_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p)
{
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<double> fields(const std::string& line)
{
    std::vector<double> out;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(std::stod(tok));
    return out;
}

} // namespace

TEST_CASE("spectrum writes the doublet and the tunnel time")
{
    fs::remove_all(scratch);
    const auto dir = scratch / "spectrum";
    REQUIRE(run("spectrum --levels 6 --out " + dir.string()) == 0);
    const auto spec = lines(dir / "spectrum.csv");
    REQUIRE(spec.size() == 7);
    CHECK(spec[0] == "n,E_n");
    const auto tt = lines(dir / "tunnel_time.csv");
    REQUIRE(tt.size() == 2);
    CHECK(tt[0] == "E0,E1,gap,tunnel_time");
    const auto v = fields(tt[1]);
    CHECK(v[2] == doctest::Approx(0.18792164530).epsilon(1e-10));
    CHECK(v[3] == doctest::Approx(16.7175668).epsilon(1e-8));
    CHECK(fs::exists(dir / "run.ini"));
    CHECK(slurp(dir / "run.ini").find("command=\"spectrum\"") != std::string::npos);
}

TEST_CASE("sweeps are byte-reproducible")
{
    const auto a = scratch / "sweep_a", b = scratch / "sweep_b";
    const std::string args = "sweep --grid 3x3 --n 50 --seed 7 --t-max 200 --out ";
    REQUIRE(run(args + a.string()) == 0);
    REQUIRE(run(args + b.string() + " --threads 2") == 0);
    const auto text = slurp(a / "rates.csv");
    CHECK(text == slurp(b / "rates.csv"));
    CHECK(lines(a / "rates.csv").size() == 10);
}

TEST_CASE("bad input exits with status 2")
{
    CHECK(run("spectrum --bogus 1 --out " + (scratch / "x").string()) == 2);
    CHECK(run("spectrum --preset medium --out " + (scratch / "x").string()) == 2);
    CHECK(run("spectrum --A 0.2 --sigma 1 --out " + (scratch / "x").string()) == 2);
    CHECK(run("lindblad --model minimal --T 0 --out " + (scratch / "x").string()) == 2);
    CHECK(run("") == 2);
}

TEST_CASE("gaussian-check reports residuals below 1e-10")
{
    const auto dir = scratch / "gauss";
    REQUIRE(run("gaussian-check --n-T 4 --n-gamma 4 --omegas 0.5 1 --out " + dir.string()) == 0);
    const auto rows = lines(dir / "gaussian_report.csv");
    REQUIRE(rows.size() > 1);
    // header names the residual columns
    std::vector<std::string> head;
    {
        std::stringstream ss(rows[0]);
        for (std::string tok; std::getline(ss, tok, ',');) head.push_back(tok);
    }
    std::size_t gt = head.size(), gf = head.size(), branch = head.size();
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (head[i] == "residual_GT") gt = i;
        if (head[i] == "residual_GF") gf = i;
        if (head[i] == "branch") branch = i;
    }
    REQUIRE(gt < head.size());
    REQUIRE(gf < head.size());
    REQUIRE(branch < head.size());
    CHECK(rows.size() == 1 + 2 * 4 * 4 * 2);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        std::vector<std::string> cols;
        std::stringstream ss(rows[r]);
        for (std::string tok; std::getline(ss, tok, ',');) cols.push_back(tok);
        CHECK(std::stod(cols[gt]) < 1e-10);
        CHECK(std::stod(cols[gf]) < 1e-10);
    }
}

TEST_CASE("the sidecar reproduces a run")
{
    const auto dir = scratch / "tunnel";
    REQUIRE(run("tunnel --t-final 2 --record-every 100 --out " + dir.string()) == 0);
    const auto first = slurp(dir / "closed.csv");
    fs::copy_file(dir / "run.ini", scratch / "tunnel.ini", fs::copy_options::overwrite_existing);
    fs::remove(dir / "closed.csv");
    REQUIRE(run("--config " + (scratch / "tunnel.ini").string() + " tunnel") == 0);
    CHECK(slurp(dir / "closed.csv") == first);
    fs::remove_all(scratch);
}
