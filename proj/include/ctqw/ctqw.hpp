#pragma once

#include "ctqw/errors.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/io.hpp"
#include "ctqw/matrix.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/pst.hpp"
#include "ctqw/rational.hpp"
#include "ctqw/search.hpp"
#include "ctqw/spectral.hpp"
