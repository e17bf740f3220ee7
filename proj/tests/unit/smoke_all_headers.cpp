#include <spreadlab/core/bits.hpp>
#include <spreadlab/core/error.hpp>
#include <spreadlab/core/rational.hpp>
#include <spreadlab/core/rng.hpp>
#include <spreadlab/diag/diagonal_product.hpp>
#include <spreadlab/diag/report.hpp>
#include <spreadlab/diag/squares.hpp>
#include <spreadlab/f2/distribution.hpp>
#include <spreadlab/f2/enumerate.hpp>
#include <spreadlab/f2/ops.hpp>
#include <spreadlab/f2/serialize.hpp>
#include <spreadlab/f2/set.hpp>
#include <spreadlab/f2/subspace.hpp>
#include <spreadlab/f2/vector.hpp>
#include <spreadlab/games/battery.hpp>
#include <spreadlab/games/evaluate.hpp>
#include <spreadlab/games/experiments.hpp>
#include <spreadlab/games/game.hpp>
#include <spreadlab/games/repeated.hpp>
#include <spreadlab/games/strategy.hpp>
#include <spreadlab/games/value.hpp>
#include <spreadlab/info/entropy.hpp>
#include <spreadlab/info/marginal.hpp>
#include <spreadlab/info/tails.hpp>
#include <spreadlab/spread/algebraic.hpp>
#include <spreadlab/spread/combinatorial.hpp>
#include <spreadlab/spread/params.hpp>
#include <spreadlab/spread/relation.hpp>
#include <spreadlab/uniform/decomposition.hpp>
#include <spreadlab/uniform/one_set.hpp>
#include <spreadlab/uniform/three_set.hpp>
#include <spreadlab/uniform/two_set.hpp>
#include <spreadlab/uniform/verify.hpp>
#include <spreadlab/version.hpp>
