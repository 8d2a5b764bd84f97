#pragma once

#include "fockfuse/fock.hpp"
#include "fockfuse/fusion.hpp"
#include "fockfuse/implementers.hpp"
#include "fockfuse/io.hpp"
#include "fockfuse/linalg.hpp"
#include "fockfuse/loops.hpp"
#include "fockfuse/model.hpp"
#include "fockfuse/modular.hpp"
#include "fockfuse/ores.hpp"
#include "fockfuse/report.hpp"
#include "fockfuse/rng.hpp"
#include "fockfuse/suites.hpp"
