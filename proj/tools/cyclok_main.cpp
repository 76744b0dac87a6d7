#include "cyclok/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cyclok::run(args, std::cout, std::cerr);
}
