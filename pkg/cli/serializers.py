import math
from pathlib import Path

from django.conf import settings
from rest_framework import serializers

from flex.models import FlexCertificate, Trilean
from polycore.fields import field_from_spec
from polycore.grammar import format_point, format_poly, normalize_point, parse_point, parse_poly
from polycore.models import Hypersurface, xy_names, y_names

INFINITY = 'infinity'
SEED_MAX = 2 ** 64 - 1


def read_source(value):
    """An inline polynomial, or the contents of the file it names."""
    path = Path(value)
    try:
        if len(value) < 256 and path.is_file():
            return path.read_text().strip()
    except OSError:
        pass
    return value


class PointField(serializers.Field):
    """
    Projective point as comma-separated coordinates, normalized so the first
    nonzero coordinate is 1. The exact field comes from the serializer context.
    """

    def to_representation(self, value):
        field = self.context['field']
        return format_point(normalize_point(value, field), field)

    def to_internal_value(self, data):
        field = self.context['field']
        return normalize_point(parse_point(str(data), field), field)


class ContactOrderField(serializers.Field):
    """Integer contact order, or the string "infinity" for a line in V."""

    def to_representation(self, value):
        return INFINITY if value == math.inf else int(value)

    def to_internal_value(self, data):
        if data == INFINITY:
            return math.inf
        try:
            return int(data)
        except (TypeError, ValueError):
            raise serializers.ValidationError(f'contact order must be an integer or "{INFINITY}"')


class JobConfigSerializer(serializers.Serializer):
    """
    Validated inputs of one command invocation.

    ``polynomial`` is inline text or a file path. After validation the
    hypersurface and the points are available as exact objects.
    """
    command = serializers.CharField()
    polynomial = serializers.CharField(required=False, trim_whitespace=True)
    field = serializers.CharField(required=False)
    seed = serializers.IntegerField(required=False, min_value=0, max_value=SEED_MAX)
    json = serializers.BooleanField(default=False)
    point = serializers.CharField(required=False, allow_null=True)
    direction = serializers.CharField(required=False, allow_null=True)

    def validate_field(self, value):
        return field_from_spec(value)

    def validate(self, attrs):
        attrs.setdefault('field', field_from_spec(settings.FLEXLOCUS['DEFAULT_FIELD']))
        if attrs.get('seed') is None:
            attrs['seed'] = settings.FLEXLOCUS['DEFAULT_SEED']
        if 'polynomial' not in attrs:
            raise serializers.ValidationError({'polynomial': "a polynomial is required"})

        field = attrs['field']
        f = parse_poly(read_source(attrs['polynomial']), field)
        V = Hypersurface.from_form(f, seed=attrs['seed'])
        if field.is_prime_field and field.modulus < 2 * V.d + 1:
            raise serializers.ValidationError(
                {'field': f"prime {field.modulus} is below 2d+1 = {2 * V.d + 1}"}
            )
        attrs['hypersurface'] = V
        for key in ('point', 'direction'):
            if attrs.get(key):
                attrs[key] = parse_point(attrs[key], field, V.nvars)
        return attrs


class ResultantJobSerializer(JobConfigSerializer):
    """``;``-separated forms in y0..yn, optionally with x-variables as parameters."""

    def validate(self, attrs):
        attrs.setdefault('field', field_from_spec(settings.FLEXLOCUS['DEFAULT_FIELD']))
        if attrs.get('seed') is None:
            attrs['seed'] = settings.FLEXLOCUS['DEFAULT_SEED']
        if 'polynomial' not in attrs:
            raise serializers.ValidationError({'polynomial': "a system of forms is required"})
        source = read_source(attrs['polynomial'])
        texts = [t for t in source.split(';') if t.strip()]
        count = len(texts)
        names = xy_names(count) if 'x' in source else y_names(count)
        attrs['forms'] = [parse_poly(text, attrs['field'], names=names) for text in texts]
        return attrs


class FlexCertificateSerializer(serializers.Serializer):
    point = PointField()
    on_hypersurface = serializers.BooleanField()
    is_flex = serializers.BooleanField()
    line_direction = PointField(allow_null=True, required=False)
    unique_line = serializers.ChoiceField(choices=Trilean.choices)
    contact_order = ContactOrderField(allow_null=True, required=False)

    def create(self, validated_data):
        point = validated_data['point']
        return FlexCertificate(
            point=point,
            on_hypersurface=validated_data['on_hypersurface'],
            is_flex=validated_data['is_flex'],
            line_direction=validated_data.get('line_direction'),
            unique_line=Trilean(validated_data['unique_line']),
            contact_order=validated_data.get('contact_order'),
            n=len(point) - 1,
        )


class ContactSerializer(serializers.Serializer):
    point = PointField()
    direction = PointField()
    contact_order = ContactOrderField()


class DegreeReportSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    d = serializers.IntegerField()
    deg_rho = serializers.IntegerField()
    deg_flex_locus = serializers.IntegerField()
    max_equation_degree = serializers.IntegerField()
    deg_line_locus = serializers.IntegerField(allow_null=True)
    deg_line_equation = serializers.IntegerField(allow_null=True)
    inflexion_bound = serializers.IntegerField(allow_null=True)


class FlexPolynomialSerializer(serializers.Serializer):
    """
    Serializer for a computed flex polynomial
    """
    field = serializers.SerializerMethodField()
    f = serializers.SerializerMethodField()
    rho = serializers.SerializerMethodField()
    degree = serializers.IntegerField()
    expected_degree = serializers.IntegerField()
    ell = serializers.SerializerMethodField()
    is_ruled = serializers.BooleanField()
    seed = serializers.IntegerField(allow_null=True)

    def get_field(self, obj):
        return obj.field.spec

    def get_f(self, obj):
        return format_poly(obj.f)

    def get_rho(self, obj):
        return format_poly(obj.rho)

    def get_ell(self, obj):
        return format_poly(obj.ell)
