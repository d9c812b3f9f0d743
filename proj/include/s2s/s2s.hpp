#pragma once

// Umbrella header: pulls in every module of the library.
//
// Individual headers can be included on their own; each one is
// self-contained and carries its own dependencies.

#include "s2s/alignment.hpp"
#include "s2s/core.hpp"
#include "s2s/distance.hpp"
#include "s2s/embedding_io.hpp"
#include "s2s/lexical_search.hpp"
#include "s2s/probe.hpp"
#include "s2s/render.hpp"
#include "s2s/similarity.hpp"
#include "s2s/vector_search.hpp"
