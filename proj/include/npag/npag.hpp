#pragma once

#include "npag/benchmarks/classification.hpp"
#include "npag/benchmarks/datasets.hpp"
#include "npag/benchmarks/losses.hpp"
#include "npag/benchmarks/portfolio.hpp"
#include "npag/benchmarks/synthetic.hpp"
#include "npag/core/random.hpp"
#include "npag/core/types.hpp"
#include "npag/driver/npag.hpp"
#include "npag/driver/prox_methods.hpp"
#include "npag/driver/sources.hpp"
#include "npag/estimators/minibatch.hpp"
#include "npag/estimators/saga.hpp"
#include "npag/estimators/spider.hpp"
#include "npag/estimators/svrg.hpp"
#include "npag/nested/chain_product.hpp"
#include "npag/nested/nested_spider.hpp"
#include "npag/problem/composition.hpp"
#include "npag/problem/mapping_family.hpp"
#include "npag/problem/regularizer.hpp"
#include "npag/prox/prox.hpp"
#include "npag/prox/soft_threshold.hpp"
#include "npag/schedules/constants.hpp"
#include "npag/schedules/epsilon.hpp"
#include "npag/schedules/nested_schedule.hpp"
#include "npag/schedules/one_level.hpp"
