#pragma once

#include "polis/blockmodel.hpp"
#include "polis/coocnet.hpp"
#include "polis/error.hpp"
#include "polis/graph.hpp"
#include "polis/ingest.hpp"
#include "polis/lexicon.hpp"
#include "polis/pipeline.hpp"
#include "polis/svg.hpp"
#include "polis/textpipe.hpp"
#include "polis/tokenize.hpp"
#include "polis/topicmdl.hpp"
#include "polis/turbulence.hpp"
