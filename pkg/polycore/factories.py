"""
factory-boy factories for seeded random forms and hypersurfaces.
"""

import random

import factory

from .fields import RATIONALS
from .models import Hypersurface, MultiPoly
from .operations import random_form


class RandomFormFactory(factory.Factory):
    """A dense random homogeneous form; ``seed`` advances per instance."""

    class Meta:
        model = MultiPoly

    field = RATIONALS
    nvars = 3
    degree = 3
    density = 1.0
    seed = factory.Sequence(lambda n: 7000 + n)

    @classmethod
    def _build(cls, model_class, field, nvars, degree, density, seed):
        return random_form(field, nvars, degree, random.Random(seed), density=density)

    @classmethod
    def _create(cls, model_class, **kwargs):
        return cls._build(model_class, **kwargs)


class HypersurfaceFactory(factory.Factory):
    """Validated hypersurface around a random form (``form__degree=4`` etc.)."""

    class Meta:
        model = Hypersurface

    form = factory.SubFactory(RandomFormFactory)
    seed = factory.Sequence(lambda n: 9000 + n)

    @classmethod
    def _build(cls, model_class, form, seed):
        return model_class.from_form(form, seed=seed)

    @classmethod
    def _create(cls, model_class, **kwargs):
        return cls._build(model_class, **kwargs)
