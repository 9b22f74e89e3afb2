from django import forms
from django.core.exceptions import ValidationError
from fractions import Fraction

from .conf import lab_setting
from .exact import as_fraction
from .lab import ExperimentConfig


class RationalField(forms.CharField):
    """Accepts 1/4, 0.25 or 1 and cleans to an exact Fraction"""
    default_error_messages = {'invalid': 'Enter a rational number such as 1/4.'}

    def to_python(self, value):
        value = super().to_python(value)
        if value in self.empty_values:
            return None
        try:
            return as_fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(self.error_messages['invalid'], code='invalid')


class ExperimentConfigForm(forms.Form):
    """Validates command-line options before they become an ExperimentConfig"""
    n = forms.IntegerField(
        min_value=1,
        error_messages={
            'required': 'Please give the number of coordinates n.',
            'min_value': 'n must be at least 1.',
        }
    )
    delta = RationalField(
        required=False,
        error_messages={'invalid': 'delta must be a rational such as 1/4 or 0.25.'}
    )
    alpha_floor = RationalField(
        required=False,
        error_messages={'invalid': 'The alpha floor must be a rational such as 1/10.'}
    )
    seed = forms.IntegerField(required=False, min_value=0)
    density = RationalField(
        required=False,
        error_messages={'invalid': 'Density must be a rational in (0, 1].'}
    )
    event_file = forms.CharField(required=False)
    affine = forms.CharField(
        required=False,
        help_text='Three hex characters g1,g2,g3 defining E_i = {x : g_i . x = 0}'
    )
    bowtie_cap = forms.IntegerField(required=False, min_value=1)
    edge_cap = forms.IntegerField(required=False, min_value=1)
    threads = forms.IntegerField(required=False, min_value=1)
    out = forms.CharField(required=False)
    parts = forms.IntegerField(required=False, min_value=1)
    samples = forms.IntegerField(required=False, min_value=1)
    trials = forms.IntegerField(required=False, min_value=1)
    only_failing = forms.BooleanField(required=False)

    def clean_n(self):
        n = self.cleaned_data.get('n')
        max_n = lab_setting('MAX_N')
        if n is not None and n > max_n:
            raise ValidationError(f'n = {n} exceeds the configured maximum of {max_n}.')
        return n

    def clean_delta(self):
        delta = self.cleaned_data.get('delta')
        if delta is not None and delta <= 0:
            raise ValidationError('delta must be positive.')
        return delta

    def clean_density(self):
        density = self.cleaned_data.get('density')
        if density is not None and not 0 < density <= 1:
            raise ValidationError('Density must lie in (0, 1].')
        return density

    def clean_affine(self):
        affine = self.cleaned_data.get('affine')
        if not affine:
            return None
        parts = [p.strip() for p in affine.split(',')]
        if len(parts) != 3:
            raise ValidationError('Give exactly three characters, one per player.')
        try:
            return tuple(int(p, 16) for p in parts)
        except ValueError:
            raise ValidationError('Characters must be hex words such as 0x3.')

    def clean(self):
        cleaned_data = super().clean()
        sources = [k for k in ('density', 'event_file', 'affine') if cleaned_data.get(k)]
        if len(sources) > 1:
            raise ValidationError(f"Choose a single event source, got {', '.join(sources)}.")
        n = cleaned_data.get('n')
        affine = cleaned_data.get('affine')
        if n and affine and any(g >> n for g in affine):
            self.add_error('affine', f'Characters must be words of F_2^{n}.')
        return cleaned_data

    def to_config(self) -> ExperimentConfig:
        data = self.cleaned_data
        defaults = ExperimentConfig()
        values = {
            'n': data['n'],
            'delta': data.get('delta') or defaults.delta,
            'alpha_floor': data.get('alpha_floor') or Fraction(0),
            'seed': data['seed'] if data.get('seed') is not None else lab_setting('SEED'),
            'density': data.get('density'),
            'event_file': data.get('event_file') or None,
            'affine': data.get('affine'),
            'bowtie_cap': data.get('bowtie_cap'),
            'edge_cap': data.get('edge_cap'),
            'threads': data.get('threads'),
            'out': data.get('out') or None,
            'split_all': not data.get('only_failing'),
        }
        for name in ('parts', 'samples', 'trials'):
            if data.get(name):
                values[name] = data[name]
        return ExperimentConfig(**values)
