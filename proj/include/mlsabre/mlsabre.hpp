#pragma once

#include "mlsabre/assignment.hpp"
#include "mlsabre/circuit.hpp"
#include "mlsabre/device.hpp"
#include "mlsabre/embedding.hpp"
#include "mlsabre/emit.hpp"
#include "mlsabre/error.hpp"
#include "mlsabre/families.hpp"
#include "mlsabre/gap.hpp"
#include "mlsabre/generators.hpp"
#include "mlsabre/mapping.hpp"
#include "mlsabre/matching.hpp"
#include "mlsabre/multilevel.hpp"
#include "mlsabre/oracle.hpp"
#include "mlsabre/qasm.hpp"
#include "mlsabre/random.hpp"
#include "mlsabre/router.hpp"
#include "mlsabre/verify.hpp"
