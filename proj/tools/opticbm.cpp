#include "opticbm/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    std::optional<unsigned> threads;
    if (const char* env = std::getenv("OPTICBM_THREADS")) {
        try {
            const unsigned long v = std::stoul(env);
            if (v > 0) threads = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring invalid OPTICBM_THREADS='" << env << "'\n";
        }
    }
    return opticbm::run_cli(argc, argv, std::cout, std::cerr, threads);
}
