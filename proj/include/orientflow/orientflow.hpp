#pragma once

#include "orientflow/bijection.hpp"
#include "orientflow/demand.hpp"
#include "orientflow/enumeration.hpp"
#include "orientflow/errors.hpp"
#include "orientflow/flow.hpp"
#include "orientflow/graph.hpp"
#include "orientflow/paths.hpp"
