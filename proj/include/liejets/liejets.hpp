// Umbrella header: pulls in the whole public surface of the library.
//
// Layering (each header includes the ones it builds on):
//   rational, errors, multi_index, polynomial   -- exact scalar arithmetic
//   matrix, sampling, parallel, report          -- shared infrastructure
//   algebroid                                   -- specs, anchor, bracket
//   enveloping                                  -- PBW operators, coproduct
//   jets                                        -- truncated jets, transports
//   groupoid                                    -- units/pairings/antipode
//   complexes                                   -- (co)chain/bar/Koszul calculus
//   homology                                    -- rank tables over windows
//   suites, config                              -- verification bundles, I/O

#pragma once

#include "liejets/algebroid.hpp"
#include "liejets/complexes.hpp"
#include "liejets/config.hpp"
#include "liejets/enveloping.hpp"
#include "liejets/errors.hpp"
#include "liejets/groupoid.hpp"
#include "liejets/homology.hpp"
#include "liejets/jets.hpp"
#include "liejets/matrix.hpp"
#include "liejets/multi_index.hpp"
#include "liejets/parallel.hpp"
#include "liejets/polynomial.hpp"
#include "liejets/rational.hpp"
#include "liejets/report.hpp"
#include "liejets/sampling.hpp"
#include "liejets/suites.hpp"
