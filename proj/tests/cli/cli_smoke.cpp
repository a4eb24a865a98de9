// Exercises the installed CLI end to end through a shell, the way a user
// would: build-pool, retrieve, gate, inspect, and the error paths.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::printf("[PASS] %s\n", what.c_str());
    } else {
        std::printf("[FAIL] %s\n", what.c_str());
        ++failures;
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_smoke <goskills binary>\n");
        return 2;
    }
    std::string bin = argv[1];
    std::string src = GOSKILLS_SOURCE_DIR;
    std::string tmp = "cli_smoke_work";
    run("rm -rf " + tmp);
    run("mkdir -p " + tmp);

    std::string fixture = src + "/data/fixtures/library";
    std::string gate_dir = src + "/data/fixtures/gate";

    expect(run(bin + " build-pool --library " + fixture + " --out " + tmp + "/pool.json > " +
               tmp + "/build.log") == 0,
           "build-pool exits zero on the fixture library");
    expect(!slurp(tmp + "/pool.json").empty(), "pool.json written");

    run(bin + " build-pool --library " + fixture + " --out " + tmp + "/pool2.json > /dev/null");
    expect(slurp(tmp + "/pool.json") == slurp(tmp + "/pool2.json"),
           "rebuilding over identical inputs is byte-identical");

    run(bin + " build-pool --library " + fixture + " --threads 4 --out " + tmp +
        "/pool4.json > /dev/null");
    expect(slurp(tmp + "/pool.json") == slurp(tmp + "/pool4.json"),
           "parallel build matches the serial build");

    expect(run(bin + " build-pool --library " + tmp + "/empty --out " + tmp +
               "/nope.json 2> " + tmp + "/err.txt") != 0,
           "build-pool fails on a missing library directory");
    expect(slurp(tmp + "/err.txt").find("skills.json") != std::string::npos,
           "failure message names the missing skills.json");

    std::string query = "\"detect fraudulent invoices across pdf and xlsx with fuzzy matching\"";
    run(bin + " retrieve --pool " + tmp + "/pool.json --query " + query + " > " + tmp +
        "/contract.txt");
    std::string contract = slurp(tmp + "/contract.txt");
    expect(contract.rfind("START", 0) == 0, "contract text starts with START");
    expect(contract.find("fuzzy-match") != std::string::npos, "contract names fuzzy-match");

    run(bin + " retrieve --pool " + tmp + "/pool.json --query " + query + " --json > " + tmp +
        "/result.json");
    std::string json = slurp(tmp + "/result.json");
    for (const char* key : {"\"plan\"", "\"skills\"", "\"debt\"", "\"contract\"",
                            "\"contract_text\"", "\"config\""}) {
        expect(json.find(key) != std::string::npos, std::string("result JSON has ") + key);
    }

    run(bin + " retrieve --pool " + tmp + "/pool.json --query " + query + " --json > " + tmp +
        "/result2.json");
    expect(slurp(tmp + "/result.json") == slurp(tmp + "/result2.json"),
           "repeated retrieve output is byte-identical");

    expect(run(bin + " retrieve --pool " + tmp + "/missing.json --query " + query +
               " 2> /dev/null") != 0,
           "retrieve fails on an unknown pool path");

    run(bin + " build-pool --library " + gate_dir + "/library --out " + tmp +
        "/gate_pool.json > /dev/null");
    run(bin + " gate --pool " + tmp + "/gate_pool.json --annotations " + gate_dir +
        "/gate.json --retriever goskills --report-json " + tmp + "/gate.json --report-csv " +
        tmp + "/gate.csv > " + tmp + "/gate.out");
    std::string gate_out = slurp(tmp + "/gate.out");
    expect(gate_out.find("must_hit=1.000") != std::string::npos,
           "goskills gate summary ends at a perfect must-hit rate");
    expect(!slurp(tmp + "/gate.csv").empty(), "gate CSV report written");
    expect(!slurp(tmp + "/gate.json").empty(), "gate JSON report written");

    run(bin + " gate --pool " + tmp + "/gate_pool.json --annotations " + gate_dir +
        "/gate.json --retriever goskills --ablate no_backfill > " + tmp + "/gate_nb.out");
    std::string nb = slurp(tmp + "/gate_nb.out");
    expect(nb.find("must_hit=1.000") == std::string::npos,
           "no_backfill ablation drops below a perfect must-hit rate");

    run(bin + " gate --pool " + tmp + "/gate_pool.json --annotations " + gate_dir +
        "/gate.json --retriever no-skills > " + tmp + "/gate_ns.out");
    expect(slurp(tmp + "/gate_ns.out").find("must_hit=0.000") != std::string::npos,
           "no-skills retriever reports a zero must-hit rate");

    run(bin + " inspect pool --pool " + tmp + "/pool.json > " + tmp + "/inspect.txt");
    expect(slurp(tmp + "/inspect.txt").find("\"groups\": 21") != std::string::npos,
           "inspect pool reports the fixture group count");

    run(bin + " inspect group --pool " + tmp + "/pool.json --id fuzzy-match+pdf-reading+xlsx > " +
        tmp + "/group.txt");
    expect(slurp(tmp + "/group.txt").find("\"parser\"") != std::string::npos,
           "inspect group shows member roles");

    if (failures == 0) run("rm -rf " + tmp);
    std::printf("%s: %d failure(s)\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
