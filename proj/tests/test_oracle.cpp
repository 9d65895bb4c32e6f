#include "udgembed/udgembed.hpp"
#include <catch2/catch_amalgamated.hpp>
