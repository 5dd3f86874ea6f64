#ifndef DFSHERALD_DFSHERALD_HPP
#define DFSHERALD_DFSHERALD_HPP

#include "dfsherald/circuit.hpp"
#include "dfsherald/detection.hpp"
#include "dfsherald/dfs_code.hpp"
#include "dfsherald/elements.hpp"
#include "dfsherald/fock.hpp"
#include "dfsherald/protocols.hpp"
#include "dfsherald/sampling.hpp"
#include "dfsherald/serialization.hpp"

#endif  // DFSHERALD_DFSHERALD_HPP
