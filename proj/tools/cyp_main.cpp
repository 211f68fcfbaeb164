#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyp/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cyp — checks equational proofs about small functional programs"};
    app.usage("cyp [OPTIONS] FILE.cyp\n       cyp -m FILE.byp FILE.cyp");

    bool blueprint_mode = false;
    bool machine = false;
    bool allow_incomplete = false;
    std::vector<std::string> files;
    app.add_flag("-m", blueprint_mode, "first file is a blueprint the second must fill");
    app.add_flag("--machine", machine, "one-line machine-readable diagnostics");
    app.add_flag("--allow-incomplete", allow_incomplete, "exit 0 even when holes remain");
    app.add_option("files", files, "module to check, or blueprint and solution")
        ->expected(1, 2)
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help();
        return 1;
    }
    if (files.empty() || blueprint_mode != (files.size() == 2)) {
        std::cerr << app.help();
        return 1;
    }

    cyp::Options opt;
    opt.machine = machine;
    opt.allow_incomplete = allow_incomplete;
    if (blueprint_mode) {
        opt.blueprint_path = files[0];
        opt.module_path = files[1];
    } else {
        opt.module_path = files[0];
    }

    cyp::Outcome result = cyp::run(opt);
    std::cout << result.out;
    std::cerr << result.err;
    return result.code;
}
