#pragma once

#include "berry.hpp"
#include "dense_matrix.hpp"
#include "eigen_qr.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "numeric.hpp"
#include "oracle_block.hpp"
#include "oracle_chain.hpp"
#include "phase.hpp"
#include "response.hpp"
#include "scan.hpp"
#include "spectrum.hpp"
