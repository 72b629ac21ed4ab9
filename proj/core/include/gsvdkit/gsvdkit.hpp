#pragma once

#include "gsvdkit/errors.hpp"
#include "gsvdkit/matcore.hpp"
#include "gsvdkit/gsvd.hpp"
#include "gsvdkit/quotient.hpp"
#include "gsvdkit/tikhonov.hpp"
#include "gsvdkit/subgeom.hpp"
#include "gsvdkit/stats.hpp"
#include "gsvdkit/jacobi.hpp"
#include "gsvdkit/io.hpp"
