#pragma once

// Umbrella header for the csplin library: exact Horn constraint solving over
// the rationals with addition, trichotomy classification of quantifier-free
// constraint languages, and verified pp-definability gadgets.

#include "csplin/ast.hpp"
#include "csplin/bench.hpp"
#include "csplin/classify.hpp"
#include "csplin/fixtures.hpp"
#include "csplin/gadgets.hpp"
#include "csplin/gauss.hpp"
#include "csplin/gen.hpp"
#include "csplin/horn.hpp"
#include "csplin/parser.hpp"
#include "csplin/pp.hpp"
#include "csplin/printer.hpp"
#include "csplin/rational.hpp"
#include "csplin/semantics.hpp"
#include "csplin/structured.hpp"
