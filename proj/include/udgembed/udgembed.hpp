#pragma once

#include "udgembed/den.hpp"
#include "udgembed/elf.hpp"
#include "udgembed/errors.hpp"
#include "udgembed/feasibility.hpp"
#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/io.hpp"
#include "udgembed/lattice.hpp"
#include "udgembed/oracle.hpp"
#include "udgembed/pipeline.hpp"
#include "udgembed/plot.hpp"
#include "udgembed/remap.hpp"
#include "udgembed/types.hpp"
