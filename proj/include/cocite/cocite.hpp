#pragma once

// Umbrella header for the whole library.

#include "cocite/analytics.hpp"
#include "cocite/categories.hpp"
#include "cocite/count_matrix.hpp"
#include "cocite/csv.hpp"
#include "cocite/dissim.hpp"
#include "cocite/errors.hpp"
#include "cocite/ingest.hpp"
#include "cocite/network_export.hpp"
#include "cocite/pipeline.hpp"
#include "cocite/profiles.hpp"
#include "cocite/records.hpp"
#include "cocite/registry.hpp"
#include "cocite/similarity.hpp"
