#include "udgembed/udgembed.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"unit-disk graph embedding for neutral-atom registers"};
    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);
    return 0;
}
