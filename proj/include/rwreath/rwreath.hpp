#pragma once

// Umbrella header.

#include "rwreath/abelian.hpp"
#include "rwreath/bialgebra.hpp"
#include "rwreath/cache.hpp"
#include "rwreath/chartab.hpp"
#include "rwreath/cyclotomic.hpp"
#include "rwreath/numeric.hpp"
#include "rwreath/parallel.hpp"
#include "rwreath/primefield.hpp"
#include "rwreath/serialize.hpp"
#include "rwreath/smith.hpp"
#include "rwreath/towermaps.hpp"
#include "rwreath/verify.hpp"
#include "rwreath/wreath.hpp"
