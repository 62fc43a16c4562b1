#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <modfree/cli.hpp>
#include <modfree/json_io.hpp>

using namespace modfree;
namespace fs = std::filesystem;

namespace
{

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("order")
    {
        CHECK(run({"order", "--N", "2", "--l", "2", "--m", "1"}).out == "-3\n");
        CHECK(run({"order", "--N", "3"}).out == "-5\n");
        CHECK(run({"order", "--N", "2", "--sigma", "0,1,1,0", "--ratio"}).out == "3\n");
        CHECK(run({"order", "--N", "3", "--v", "1,0"}).out == "-1\n");
        CHECK(run({"order", "--N", "4", "--v", "1,0"}).out == "-1/2\n");
        const auto t = json::parse(run({"order", "--N", "2", "--table"}).out);
        CHECK(t["rows"].size() == 5);
        CHECK(t["rows"][0]["B2"] == "1/6");
    }

    TEST_CASE("act and group")
    {
        const auto a = json::parse(run({"act", "--N", "3", "--sigma", "0,-1,1,0", "--v", "0,1"}).out);
        CHECK(a["v"] == json::array({1, 0}));
        const auto g = json::parse(run({"group", "--N", "3"}).out);
        CHECK(g["order"] == 12);
        CHECK(g["subgroup_count"] == 10);
        CHECK(json::parse(run({"group", "--N", "4", "--family", "gamma0"}).out)["subgroup_count"] == 3);
        CHECK(run({"group", "--N", "6"}).code == cli::usage);
    }

    TEST_CASE("minimum-order verdict")
    {
        const auto r = run({"verify-lemma22", "--N", "3", "--l", "2", "--m", "1"});
        CHECK(r.code == cli::ok);
        const auto j = json::parse(r.out);
        CHECK(j["pass"] == true);
        CHECK(j["equality_set"].size() == 3);
    }

    TEST_CASE("usage errors")
    {
        for (const auto &args : std::vector<std::vector<std::string>>{
                 {"order", "--N", "2", "--bogus"},
                 {"frobnicate"},
                 {},
                 {"order", "--N", "1"},
                 {"order", "--N", "2", "--l", "1", "--m", "1"},
                 {"expand", "--N", "2", "--v", "0,0", "--no-cache"},
                 {"expand", "--N", "2", "--v", "0,1", "--horizon", "0", "--no-cache"},
                 {"search", "--N", "2", "--precision", "32"},
                 {"search", "--N", "2", "--epsilon", "1/0"},
                 {"certify", "--N", "2", "--scope", "sideways"},
             }) {
            CAPTURE(args.size());
            const auto r = run(args);
            CHECK(r.code == cli::usage);
            CHECK(r.out.empty());
            const auto e = json::parse(r.err);
            CHECK(e["code"] == "usage");
            CHECK(e.contains("message"));
            CHECK(e.contains("context"));
        }
    }

    TEST_CASE("failure and inconclusive exits")
    {
        const auto fail = run({"certify", "--N", "2", "--l", "2", "--m", "1", "--scope", "full", "--r", "1", "--no-cache"});
        CHECK(fail.code == cli::certification_failure);
        CHECK(json::parse(fail.out)["pass"] == false);

        const auto budget = run({"search", "--N", "2", "--budget", "2"});
        CHECK(budget.code == cli::inconclusive);
        CHECK(json::parse(budget.err)["code"] == "inconclusive");

        const auto prim = run({"primitivity", "--N", "3", "--horizon", "1", "--no-cache"});
        CHECK(prim.code == cli::inconclusive);
    }

    TEST_CASE("expand is identical with and without the cache")
    {
        const fs::path dir = fs::temp_directory_path() / ("modfree-cli-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        const auto plain = run({"expand", "--N", "3", "--v", "1,2", "--horizon", "30", "--no-cache"});
        const auto first = run({"expand", "--N", "3", "--v", "1,2", "--horizon", "30", "--cache-dir", dir.string()});
        const auto second = run({"expand", "--N", "3", "--v", "1,2", "--horizon", "30", "--cache-dir", dir.string()});
        CHECK(plain.code == 0);
        CHECK(plain.out == first.out);
        CHECK(first.out == second.out);
        CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) == 1);
        fs::remove_all(dir);
    }

    TEST_CASE("sweep writes one report per level")
    {
        const fs::path dir = fs::temp_directory_path() / ("modfree-sweep-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        const auto r = run({"sweep", "--N-range", "2..3", "--results-dir", dir.string(), "--no-cache"});
        CHECK(r.code == cli::ok);
        const auto j = json::parse(r.out);
        REQUIRE(j["reports"].size() == 2);
        for (const auto &rep : j["reports"]) {
            CHECK(fs::exists(rep["file"].get<std::string>()));
            CHECK(rep["pass"] == true);
        }
        // Append-only: a second sweep never overwrites.
        run({"sweep", "--N-range", "2..2", "--results-dir", dir.string(), "--no-cache"});
        CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) == 3);
        CHECK(run({"sweep", "--N-range", "3..2", "--results-dir", dir.string()}).code == cli::usage);
        fs::remove_all(dir);
    }
}
