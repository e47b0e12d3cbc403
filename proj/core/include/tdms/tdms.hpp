#pragma once

#include "tdms/baselines.hpp"
#include "tdms/decimal.hpp"
#include "tdms/document.hpp"
#include "tdms/error.hpp"
#include "tdms/evaluation.hpp"
#include "tdms/inference.hpp"
#include "tdms/instances.hpp"
#include "tdms/io.hpp"
#include "tdms/metrics.hpp"
#include "tdms/representation.hpp"
#include "tdms/scorer.hpp"
#include "tdms/table.hpp"
#include "tdms/taxonomy.hpp"
#include "tdms/text.hpp"
