#pragma once

// Umbrella header for the core library (series, surfaces, local analysis,
// curve tracing, topology, cut-and-paste).  io.hpp and report.hpp add JSON
// and file output on top.

#include "branchpt/error.hpp"
#include "branchpt/biseries.hpp"
#include "branchpt/polynomial.hpp"
#include "branchpt/weierstrass.hpp"
#include "branchpt/branchlocal.hpp"
#include "branchpt/curvetrace.hpp"
#include "branchpt/topology.hpp"
#include "branchpt/cutpaste.hpp"
